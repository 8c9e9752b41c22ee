#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mlsabre/families.hpp"
#include "mlsabre/multilevel.hpp"
#include "mlsabre/verify.hpp"
#include "support/oracles.hpp"

namespace mlsabre {
namespace {

// Recounts every structural rule of one coarsening round from scratch.
void expect_cluster_invariants(const Circuit& c, const CouplingGraph& g, const Mapping& f, const Level& coarse,
                               const ClusterMap& cm) {
  const int nq = c.num_qubits();
  const int np = g.num_physical();
  ASSERT_EQ(static_cast<int>(cm.prog_to_coarse.size()), nq);
  ASSERT_EQ(static_cast<int>(cm.phys_to_coarse.size()), np);
  for (const auto& members : cm.phys_members) {
    ASSERT_GE(members.size(), 1u);
    ASSERT_LE(members.size(), 2u);
    if (members.size() == 2) {
      EXPECT_TRUE(g.adjacent(members[0], members[1]));
    }
  }
  for (const auto& members : cm.prog_members) {
    ASSERT_GE(members.size(), 1u);
    ASSERT_LE(members.size(), 2u);
  }
  for (int p = 0; p < np; ++p) {
    const auto& m = cm.phys_members[cm.phys_to_coarse[p]];
    EXPECT_NE(std::find(m.begin(), m.end(), p), m.end());
  }
  // Program qubits share a coarse qubit iff they share a physical cluster.
  for (int q = 0; q < nq; ++q) {
    EXPECT_EQ(cm.prog_to_coarse[q], cm.phys_to_coarse[f.phys(q)]);
  }
  // Trivial mapping on occupied coarse qubits.
  EXPECT_EQ(coarse.mapping, Mapping::identity(coarse.circuit.num_qubits(), coarse.graph.num_physical()));
  // Coarse gates: fine inter-cluster two-qubit gates, in order.
  std::vector<std::pair<int, int>> expect_gates;
  for (const Gate& gate : c.gates()) {
    if (!gate.two_qubit()) continue;
    const int a = cm.prog_to_coarse[gate.qubits[0]];
    const int b = cm.prog_to_coarse[gate.qubits[1]];
    if (a != b) expect_gates.emplace_back(a, b);
  }
  std::vector<std::pair<int, int>> got_gates;
  for (const Gate& gate : coarse.circuit.gates()) {
    EXPECT_TRUE(gate.two_qubit());
    got_gates.emplace_back(gate.qubits[0], gate.qubits[1]);
  }
  EXPECT_EQ(got_gates, expect_gates);
  // Coarse edge (A,B) iff some fine edge joins A and B.
  const int nc = coarse.graph.num_physical();
  for (int a = 0; a < nc; ++a) {
    for (int b = 0; b < nc; ++b) {
      if (a == b) continue;
      bool joined = false;
      for (int x : cm.phys_members[a]) {
        for (int y : cm.phys_members[b]) joined = joined || g.adjacent(x, y);
      }
      EXPECT_EQ(coarse.graph.adjacent(a, b), joined);
    }
  }
}

TEST(IsEmbeddable, Basics) {
  EXPECT_TRUE(is_embeddable(Circuit(3), grid_device(1, 3), Mapping::identity(3, 3)));
  EXPECT_TRUE(is_embeddable(families::ghz(4), grid_device(1, 4), Mapping::identity(4, 4)));
  Circuit c(3);
  c.add_two_qubit("cx", 0, 2);
  EXPECT_FALSE(is_embeddable(c, grid_device(1, 3), Mapping::identity(3, 3)));
}

TEST(Coarsen, WeightedPathOfFour) {
  Circuit c(4);
  for (int i = 0; i < 3; ++i) c.add_two_qubit("cx", 0, 1);
  c.add_two_qubit("cx", 1, 2);
  for (int i = 0; i < 3; ++i) c.add_two_qubit("cx", 2, 3);
  const auto g = grid_device(1, 4);
  const Mapping f = Mapping::identity(4, 4);
  const auto [coarse, cm] = coarsen(c, g, f);
  EXPECT_EQ(cm.phys_members, (std::vector<std::vector<int>>{{0, 1}, {2, 3}}));
  EXPECT_EQ(coarse.circuit.num_two_qubit_gates(), 1);
  EXPECT_EQ(coarse.graph.num_physical(), 2);
  expect_cluster_invariants(c, g, f, coarse, cm);
}

TEST(Coarsen, IntraClusterGateDropped) {
  Circuit c(2);
  c.add_two_qubit("cx", 0, 1);
  const auto g = grid_device(1, 2);
  const auto [coarse, cm] = coarsen(c, g, Mapping::identity(2, 2));
  EXPECT_EQ(coarse.circuit.size(), 0u);
  EXPECT_TRUE(is_embeddable(coarse.circuit, coarse.graph, coarse.mapping));
}

TEST(Coarsen, SixQubitExampleShrinksToThreeThenTwo) {
  // Heavy vertical pairs on a 2x3 grid plus one gate spanning the grid.
  const auto g = grid_device(2, 3);
  Circuit c(6);
  for (int col = 0; col < 3; ++col) {
    for (int i = 0; i < 3; ++i) c.add_two_qubit("cx", col, col + 3);
  }
  c.add_two_qubit("cx", 0, 2);
  const Mapping f = Mapping::identity(6, 6);
  const auto [l1, cm1] = coarsen(c, g, f);
  EXPECT_EQ(l1.graph.num_physical(), 3);
  EXPECT_EQ(cm1.phys_members, (std::vector<std::vector<int>>{{0, 3}, {1, 4}, {2, 5}}));
  EXPECT_EQ(l1.circuit.num_two_qubit_gates(), 1);
  EXPECT_FALSE(is_embeddable(l1.circuit, l1.graph, l1.mapping));
  expect_cluster_invariants(c, g, f, l1, cm1);
  const auto [l2, cm2] = coarsen(l1.circuit, l1.graph, l1.mapping);
  EXPECT_EQ(l2.graph.num_physical(), 2);
  EXPECT_EQ(l2.graph.num_edges(), 1u);
  EXPECT_TRUE(is_embeddable(l2.circuit, l2.graph, l2.mapping));
  expect_cluster_invariants(l1.circuit, l1.graph, l1.mapping, l2, cm2);

  const Hierarchy h = build_hierarchy(c, g, f);
  EXPECT_FALSE(h.finest_embeddable);
  ASSERT_EQ(h.levels.size(), 2u);
  EXPECT_EQ(h.levels.back().graph.num_physical(), 3);
  EXPECT_FALSE(is_embeddable(h.levels.back().circuit, h.levels.back().graph, h.levels.back().mapping));
}

TEST(Coarsen, UnoccupiedQubitsJoinClusters) {
  Circuit c(2);
  c.add_two_qubit("cx", 0, 1);
  const auto g = grid_device(1, 5);
  const Mapping f({0, 4}, 5);
  const auto [coarse, cm] = coarsen(c, g, f);
  expect_cluster_invariants(c, g, f, coarse, cm);
  EXPECT_TRUE(coarse.graph.connected());
  EXPECT_EQ(coarse.circuit.num_qubits(), 2);
}

TEST(Coarsen, RandomLevelsKeepInvariants) {
  Rng rng(500);
  for (int trial = 0; trial < 150; ++trial) {
    const int np = 2 + static_cast<int>(rng.below(9));
    const int nq = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(np)));
    const auto g = testing::random_connected_device(np, 0.2, rng);
    const Circuit c = families::random_circuit(nq, static_cast<int>(rng.below(40)), 0.8, rng.next());
    const Mapping f = Mapping::random(nq, np, rng);
    const auto [coarse, cm] = coarsen(c, g, f);
    expect_cluster_invariants(c, g, f, coarse, cm);
  }
}

TEST(Hierarchy, FinestEmbeddable) {
  const Hierarchy h = build_hierarchy(families::ghz(4), grid_device(1, 4), Mapping::identity(4, 4));
  EXPECT_TRUE(h.finest_embeddable);
  EXPECT_EQ(h.levels.size(), 1u);
}

TEST(Hierarchy, TopIsNeverEmbeddableAndHeightIsLogarithmic) {
  const auto g = eagle127_device();
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Circuit c = families::random_circuit(127, 800, 1.0, seed);
    Rng rng(seed);
    const Hierarchy h = build_hierarchy(c, g, Mapping::random(127, 127, rng));
    ASSERT_FALSE(h.levels.empty());
    EXPECT_LE(h.levels.size(), 1u + static_cast<std::size_t>(std::ceil(std::log2(127.0))));
    if (!h.stalled) {
      const Level& top = h.levels.back();
      EXPECT_FALSE(is_embeddable(top.circuit, top.graph, top.mapping));
      const auto [child, cm] = coarsen(top.circuit, top.graph, top.mapping);
      EXPECT_TRUE(is_embeddable(child.circuit, child.graph, child.mapping));
    }
  }
}

TEST(CoarsestSolve, PathWithOneFarGate) {
  Circuit c(3);
  c.add_two_qubit("cx", 0, 2);
  const auto g = grid_device(1, 3);
  const Level level{c, g, Mapping::identity(3, 3), std::nullopt};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    MlConfig cfg;
    cfg.coarsest_trials = 20;
    const auto r = coarsest_solve(level, cfg, seed);
    EXPECT_EQ(r.compiled.swap_count, 0);
    EXPECT_TRUE(g.adjacent(r.mapping.phys(0), r.mapping.phys(2)));
  }
}

TEST(CoarsestSolve, EmptyCircuit) {
  const Level level{Circuit(2), grid_device(1, 3), Mapping::identity(2, 3), std::nullopt};
  MlConfig cfg;
  cfg.coarsest_trials = 3;
  EXPECT_EQ(coarsest_solve(level, cfg, 0).compiled.swap_count, 0);
}

TEST(Interpolate, ClustersFitGivesZeroCost) {
  Circuit c(4);
  c.add_two_qubit("cx", 0, 1);
  c.add_two_qubit("cx", 2, 3);
  c.add_two_qubit("cx", 1, 2);
  const auto g = grid_device(1, 4);
  const Mapping f = Mapping::identity(4, 4);
  const auto [coarse, cm] = coarsen(c, g, f);
  const Level fine{c, g, f, std::nullopt};
  const auto out = interpolate(fine, coarse.mapping, cm, 5, 1);
  ASSERT_FALSE(out.empty());
  for (const auto& m : out) {
    for (int q = 0; q < 4; ++q) {
      const auto& members = cm.phys_members[cm.prog_to_coarse[q]];
      EXPECT_NE(std::find(members.begin(), members.end(), m.phys(q)), members.end());
    }
  }
  EXPECT_GE(out.size(), 2u);
}

TEST(Interpolate, PairIntoSingleton) {
  // Program cluster {0,1} on physical singleton {1}; physical 0, 2, 3 free.
  const auto g = grid_device(1, 4);
  Circuit c(2);
  const Level fine{c, g, Mapping::identity(2, 4), std::nullopt};
  ClusterMap cm;
  cm.prog_to_coarse = {0, 0};
  cm.phys_to_coarse = {1, 0, 2, 2};
  cm.prog_members = {{0, 1}};
  cm.phys_members = {{1}, {0}, {2, 3}};
  const auto out = interpolate(fine, Mapping::identity(1, 3), cm, 10, 2);
  std::set<std::vector<int>> seen;
  for (const auto& m : out) {
    EXPECT_EQ(g.distance(m.phys(0), 1) + g.distance(m.phys(1), 1), 1);
    EXPECT_NE(m.phys(0), m.phys(1));
    seen.insert(m.forward());
  }
  // Optimal ones: one qubit on 1, the other on 0 or 2.
  EXPECT_LE(seen.size(), 4u);
}

TEST(Interpolate, SingletonIdentity) {
  const auto g = grid_device(2, 2);
  Circuit c(4);
  const Level fine{c, g, Mapping::identity(4, 4), std::nullopt};
  ClusterMap cm;
  cm.prog_to_coarse = {0, 1, 2, 3};
  cm.phys_to_coarse = {0, 1, 2, 3};
  cm.prog_members = {{0}, {1}, {2}, {3}};
  cm.phys_members = {{0}, {1}, {2}, {3}};
  const auto out = interpolate(fine, Mapping::identity(4, 4), cm, 3, 0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], Mapping::identity(4, 4));
}

TEST(Refine, EmbeddableSeedNoRandom) {
  const Level level{families::ghz(5), grid_device(1, 5), Mapping::identity(5, 5), std::nullopt};
  MlConfig cfg;
  cfg.random_trials_per_level = 0;
  const auto r = refine(level, {level.mapping, level.mapping}, cfg, 0);
  EXPECT_EQ(r.compiled.swap_count, 0);
  EXPECT_EQ(r.mapping, level.mapping);
}

TEST(MlConfig, Validation) {
  MlConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.cycles = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.interpolations = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

MlConfig small_config(std::uint64_t seed) {
  MlConfig cfg;
  cfg.cycles = 4;
  cfg.coarsest_trials = 20;
  cfg.interpolations = 10;
  cfg.seed = seed;
  return cfg;
}

TEST(MlSabre, ValidAndMonotone) {
  Rng rng(8);
  for (int trial = 0; trial < 12; ++trial) {
    const auto g = testing::random_connected_device(6 + static_cast<int>(rng.below(15)), 0.1, rng);
    const int nq = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(g.num_physical() - 1)));
    const Circuit c = families::random_circuit(nq, 80, 0.7, rng.next());
    const auto res = ml_sabre(c, g, small_config(trial));
    const auto rep = verify(res.compiled, c, g);
    ASSERT_TRUE(rep.valid) << rep.violations.front().reason;
    ASSERT_EQ(res.trace.size(), 5u);
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
      EXPECT_LE(res.trace[i].best_swaps, res.trace[i - 1].best_swaps);
    }
    EXPECT_EQ(res.trace.back().best_swaps, res.compiled.swap_count);
  }
}

TEST(MlSabre, Deterministic) {
  const Circuit c = families::random_local(16, 80, 3, 4);
  const auto g = grid_device(4, 4);
  const auto a = ml_sabre(c, g, small_config(3));
  const auto b = ml_sabre(c, g, small_config(3));
  EXPECT_EQ(a.compiled.schedule, b.compiled.schedule);
  EXPECT_EQ(a.compiled.initial_mapping, b.compiled.initial_mapping);
  MlConfig par = small_config(3);
  par.jobs = 3;
  EXPECT_EQ(ml_sabre(c, g, par).compiled.schedule, a.compiled.schedule);
}

TEST(MlSabre, FixedPointTriggersRestart) {
  // Embeddable from the start: every cycle returns the same mapping, so the
  // second cycle must restart from a fresh mapping.
  const Circuit c = families::ghz(6);
  const auto g = grid_device(2, 3);
  const auto res = ml_sabre(c, g, small_config(0));
  EXPECT_EQ(res.compiled.swap_count, 0);
  ASSERT_FALSE(res.restarts.empty());
  EXPECT_EQ(res.restarts.front().first, 2);
  const auto& fresh = res.restarts.front().second;
  EXPECT_NE(res.visited.front(), fresh);
  EXPECT_TRUE(res.trace[2].restarted);
}

TEST(MlSabre, ChainOnWillowIsSwapFree) {
  const auto res = ml_sabre(families::wstate(76), willow105_device(), small_config(0));
  EXPECT_EQ(res.compiled.swap_count, 0);
}

}  // namespace
}  // namespace mlsabre
