#include <gtest/gtest.h>

#include <cstdlib>

#include "mlsabre/device.hpp"

namespace mlsabre {
namespace {

TEST(GridDevice, Shapes) {
  const auto p = grid_device(1, 3);
  EXPECT_EQ(p.num_physical(), 3);
  EXPECT_EQ(p.num_edges(), 2u);
  const auto g = grid_device(2, 3);
  EXPECT_EQ(g.num_physical(), 6);
  EXPECT_EQ(g.num_edges(), 7u);
  EXPECT_EQ(g.distance(0, 1 * 3 + 2), 3);
  EXPECT_THROW(grid_device(0, 3), std::invalid_argument);
}

TEST(GridDevice, DistanceIsManhattan) {
  for (int r = 1; r <= 6; ++r) {
    for (int c = 1; c <= 6; ++c) {
      const auto g = grid_device(r, c);
      for (int a = 0; a < r * c; ++a) {
        for (int b = 0; b < r * c; ++b) {
          EXPECT_EQ(g.distance(a, b), std::abs(a / c - b / c) + std::abs(a % c - b % c));
        }
      }
    }
  }
}

TEST(Willow, Preset) {
  const auto g = willow105_device();
  EXPECT_EQ(g.num_physical(), 105);
  EXPECT_EQ(g, grid_device(7, 15));
}

TEST(HeavyHex, Eagle127) {
  const auto g = heavy_hex_device(HeavyHexPreset::Eagle127);
  EXPECT_EQ(g.num_physical(), 127);
  EXPECT_EQ(g.num_edges(), 144u);
  EXPECT_EQ(g.max_degree(), 3);
  EXPECT_TRUE(g.connected());
  for (int v = 0; v < 127; ++v) {
    EXPECT_GE(g.degree(v), 1);
    EXPECT_LE(g.degree(v), 3);
  }
}

TEST(HeavyHex, UnitCellIsTwelveCycle) {
  const auto g = heavy_hex_device(1, 1);
  EXPECT_EQ(g.num_physical(), 12);
  EXPECT_EQ(g.num_edges(), 12u);
  for (int v = 0; v < 12; ++v) EXPECT_EQ(g.degree(v), 2);
  EXPECT_TRUE(g.connected());
}

TEST(HeavyHex, GeneratedLatticesHaveDegreeOneToThree) {
  for (int r = 1; r <= 4; ++r) {
    for (int c = 1; c <= 4; ++c) {
      const auto g = heavy_hex_device(r, c);
      EXPECT_TRUE(g.connected());
      for (int v = 0; v < g.num_physical(); ++v) {
        EXPECT_GE(g.degree(v), 1);
        EXPECT_LE(g.degree(v), 3);
      }
      EXPECT_EQ(g, heavy_hex_device(r, c));
    }
  }
  EXPECT_THROW(heavy_hex_device(0, 2), std::invalid_argument);
}

TEST(ParseDevice, Path) {
  const auto g = parse_device("3\n0 1\n1 2\n");
  EXPECT_EQ(g.num_physical(), 3);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.distance(0, 2), 2);
}

TEST(ParseDevice, Errors) {
  EXPECT_THROW(parse_device("2\n0 0\n"), ParseError);
  EXPECT_THROW(parse_device("2\n0 2\n"), ParseError);
  EXPECT_THROW(parse_device("2\n0 x\n"), ParseError);
  EXPECT_THROW(parse_device("# nothing\n"), ParseError);
}

TEST(ParseDevice, DuplicatesWarn) {
  std::vector<std::string> warnings;
  const auto g = parse_device("# comment\n3\n0 1 # first\n1 0\n1 2\n", &warnings);
  EXPECT_EQ(g.num_edges(), 2u);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("line 4"), std::string::npos);
}

TEST(ParseDevice, SixNodeClusterShape) {
  // Six-node ring.
  const auto g = parse_device("6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
  EXPECT_EQ(g.num_edges(), 6u);
  EXPECT_EQ(g.distance(0, 3), 3);
  EXPECT_EQ(g.num_physical(), 6);
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) EXPECT_LE(g.distance(a, b), 3);
  }
}

TEST(ParseDevice, SerializeRoundTrip) {
  for (const auto& g : {grid_device(3, 4), eagle127_device(), heavy_hex_device(2, 3)}) {
    EXPECT_EQ(parse_device(serialize_device(g)), g);
  }
}

TEST(Distances, Disconnected) {
  const CouplingGraph g(2, {});
  EXPECT_EQ(all_pairs_distances(g)[1], kUnreachable);
  EXPECT_FALSE(g.connected());
}

TEST(Distances, MetricProperties) {
  for (const auto& g : {eagle127_device(), heavy_hex_device(2, 2), grid_device(4, 5)}) {
    const int n = g.num_physical();
    for (int a = 0; a < n; ++a) {
      EXPECT_EQ(g.distance(a, a), 0);
      for (int b = 0; b < n; ++b) {
        EXPECT_EQ(g.distance(a, b), g.distance(b, a));
        EXPECT_EQ(g.distance(a, b) == 1, g.adjacent(a, b));
      }
    }
    for (int a = 0; a < n; a += 7) {
      for (int b = 0; b < n; b += 3) {
        for (int c = 0; c < n; c += 5) EXPECT_LE(g.distance(a, c), g.distance(a, b) + g.distance(b, c));
      }
    }
  }
}

TEST(Presets, Names) {
  CouplingGraph g;
  ASSERT_TRUE(preset_device("grid:2x3", g));
  EXPECT_EQ(g, grid_device(2, 3));
  ASSERT_TRUE(preset_device("heavyhex:1x1", g));
  EXPECT_EQ(g.num_physical(), 12);
  ASSERT_TRUE(preset_device("eagle127", g));
  EXPECT_EQ(g.num_physical(), 127);
  EXPECT_FALSE(preset_device("some/file.txt", g));
  EXPECT_THROW(preset_device("grid:3", g), std::invalid_argument);
}

TEST(CouplingGraph, RejectsSelfLoopsAndDedups) {
  EXPECT_THROW(CouplingGraph(2, {{1, 1}}), std::invalid_argument);
  const CouplingGraph g(3, {{0, 1}, {1, 0}, {1, 2}});
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.duplicates_dropped(), 1u);
}

}  // namespace
}  // namespace mlsabre
