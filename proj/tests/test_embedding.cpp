#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "mlsabre/embedding.hpp"
#include "mlsabre/families.hpp"
#include "mlsabre/oracle.hpp"
#include "mlsabre/router.hpp"
#include "mlsabre/verify.hpp"

namespace mlsabre {
namespace {

using Kind = StructureClass::Kind;

bool injective_total(const Mapping& m) {
  std::set<int> seen;
  for (int q = 0; q < m.num_program(); ++q) {
    if (m.phys(q) < 0 || m.phys(q) >= m.num_physical() || !seen.insert(m.phys(q)).second) return false;
  }
  return true;
}

int zero_trial_swaps(const Circuit& c, const CouplingGraph& g, const Mapping& f) {
  return route_best_of(c, g, {f}, 0).compiled.swap_count;
}

CouplingGraph star_device(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return CouplingGraph(leaves + 1, e);
}

TEST(Classify, IsingChainIsLine) {
  EXPECT_EQ(classify_interaction_graph(interaction_graph(families::ising(6))).kind, Kind::Line);
}

TEST(Classify, SwapTestIsStarLike) {
  const auto cls = classify_interaction_graph(interaction_graph(families::swap_test(9)));
  EXPECT_EQ(cls.kind, Kind::StarLike);
  EXPECT_EQ(cls.center, 0);
}

TEST(Classify, CompleteGraphIsGeneral) {
  EXPECT_EQ(classify_interaction_graph(interaction_graph(families::qft(4))).kind, Kind::General);
}

TEST(Classify, EdgeCases) {
  EXPECT_EQ(classify_interaction_graph(interaction_graph(Circuit(3))).kind, Kind::General);
  Circuit pair(2);
  pair.add_two_qubit("cx", 0, 1);
  EXPECT_EQ(classify_interaction_graph(interaction_graph(pair)).kind, Kind::Line);
  // Plain hub with isolated leaves.
  const auto bv = classify_interaction_graph(interaction_graph(families::bv(6)));
  EXPECT_EQ(bv.kind, Kind::StarLike);
  EXPECT_EQ(bv.center, 5);
  // Cycle: no path, no hub.
  Circuit ring(5);
  for (int i = 0; i < 5; ++i) ring.add_two_qubit("cx", i, (i + 1) % 5);
  EXPECT_EQ(classify_interaction_graph(interaction_graph(ring)).kind, Kind::General);
  // Unused qubits do not matter.
  Circuit sparse(10);
  sparse.add_two_qubit("cx", 3, 7);
  sparse.add_two_qubit("cx", 7, 9);
  EXPECT_EQ(classify_interaction_graph(interaction_graph(sparse)).kind, Kind::Line);
}

TEST(LongestPath, GridHasHamiltonianPath) {
  EXPECT_EQ(greedy_longest_path(grid_device(2, 3)).size(), 6u);
  EXPECT_EQ(greedy_longest_path(grid_device(4, 4)).size(), 16u);
  const auto p = greedy_longest_path(eagle127_device());
  const auto g = eagle127_device();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) EXPECT_TRUE(g.adjacent(p[i], p[i + 1]));
  EXPECT_EQ(std::set<int>(p.begin(), p.end()).size(), p.size());
  EXPECT_GE(p.size(), 98u);
}

TEST(EmbedLine, SixQubitLineOnGridIsSwapFree) {
  const Circuit c = families::ghz(6);
  const auto g = grid_device(2, 3);
  const Mapping f = embed_line(c, g);
  EXPECT_TRUE(injective_total(f));
  EXPECT_EQ(route_once(c, g, f).swap_count, 0);
}

TEST(EmbedLine, ScrambledLabelsStillSwapFree) {
  // Chain 4-1-5-0-3-2 in program labels.
  const std::vector<int> order{4, 1, 5, 0, 3, 2};
  Circuit c(6);
  for (int i = 0; i + 1 < 6; ++i) c.add_two_qubit("cz", order[i + 1], order[i]);
  const auto g = grid_device(3, 3);
  EXPECT_EQ(route_once(c, g, embed_line(c, g)).swap_count, 0);
}

TEST(EmbedLine, EagleChainsAreSwapFree) {
  const auto g = eagle127_device();
  for (const Circuit& c : {families::cat(65), families::ghz(78), families::ising(98), families::wstate(76)}) {
    const Mapping f = embed_line(c, g);
    EXPECT_TRUE(injective_total(f));
    EXPECT_EQ(route_once(c, g, f).swap_count, 0);
  }
}

TEST(EmbedLine, BranchesOnShortPathGraph) {
  // Path 0..5 with pendant nodes 6 on 1 and 7 on 4.
  const CouplingGraph g(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 6}, {4, 7}});
  const Circuit c = families::ghz(8);
  const Mapping f = embed_line(c, g);
  EXPECT_TRUE(injective_total(f));
  const int swaps = zero_trial_swaps(c, g, f);
  const int optimum = oracle_optimal_swaps(c, g, {8, 15});
  EXPECT_EQ(swaps, optimum);
  EXPECT_GE(swaps, 1);
}

TEST(EmbedLine, RejectsNonLine) {
  EXPECT_THROW(embed_line(families::qft(4), grid_device(2, 2)), std::invalid_argument);
  EXPECT_THROW(embed_line(families::ghz(5), grid_device(2, 2)), InfeasibleError);
}

TEST(EmbedDense, WholeGraphWhenSizesMatch) {
  const Circuit c = families::qft(6);
  const auto g = grid_device(2, 3);
  const Mapping f = embed_dense(c, g);
  EXPECT_TRUE(injective_total(f));
  EXPECT_EQ(f.num_physical(), 6);
}

TEST(EmbedDense, CompleteFourOnGridUsesBlock) {
  const Circuit c = families::qft(4);
  const auto g = grid_device(2, 3);
  const Mapping f = embed_dense(c, g);
  std::set<int> region;
  for (int q = 0; q < 4; ++q) region.insert(f.phys(q));
  int internal = 0;
  for (const Edge& e : g.edges()) internal += region.count(e.u) && region.count(e.v);
  EXPECT_EQ(internal, 4);
  EXPECT_TRUE(region == (std::set<int>{0, 1, 3, 4}) || region == (std::set<int>{1, 2, 4, 5}));
}

TEST(EmbedDense, SingleQubitOnMaxDegreeNode) {
  Circuit c(1);
  c.add_one_qubit("h", 0);
  const auto g = grid_device(2, 3);
  const Mapping f = embed_dense(c, g);
  EXPECT_EQ(g.degree(f.phys(0)), g.max_degree());
  EXPECT_EQ(f.phys(0), 1);
}

TEST(EmbedStar, HubOnStarDevice) {
  const Circuit c = families::bv(6);
  const auto g = star_device(6);
  const Mapping f = embed_star(c, g);
  EXPECT_EQ(f.phys(5), 0);
  EXPECT_EQ(route_once(c, g, f).swap_count, 0);
}

TEST(EmbedStar, CenterMovesForwardOnly) {
  Circuit c(10);
  for (int q = 1; q < 10; ++q) c.add_two_qubit("cx", 0, q);
  const auto g = heavy_hex_device(1, 2);
  const Mapping f = embed_star(c, g);
  EXPECT_TRUE(injective_total(f));
  const auto cc = route_best_of(c, g, {f}, 0).compiled;
  ASSERT_TRUE(verify(cc, c, g).valid);
  Mapping m = cc.initial_mapping;
  std::vector<int> visited{m.phys(0)};
  for (const auto& e : cc.schedule) {
    if (!e.is_swap()) continue;
    m.swap_physical(e.edge.u, e.edge.v);
    if (m.phys(0) != visited.back()) {
      EXPECT_EQ(std::count(visited.begin(), visited.end(), m.phys(0)), 0) << "center returned to " << m.phys(0);
      visited.push_back(m.phys(0));
    }
  }
}

TEST(EmbedStar, SwapTestOnEagleBeatsRandomMedian) {
  const Circuit c = families::swap_test(9);
  const auto g = eagle127_device();
  const int star = route_once(c, g, embed_star(c, g)).swap_count;
  std::vector<int> random;
  for (int t = 0; t < 100; ++t) {
    Rng rng(mix_seed(99, t));
    random.push_back(route_once(c, g, Mapping::random(9, 127, rng)).swap_count);
  }
  std::nth_element(random.begin(), random.begin() + 50, random.end());
  EXPECT_LT(star, random[50]);
}

TEST(EmbedStar, HubTooWideForPathDevice) {
  const Circuit c = families::bv(5);
  const auto g = grid_device(1, 5);
  const Mapping f = embed_star(c, g);
  EXPECT_TRUE(injective_total(f));
  EXPECT_TRUE(verify(route_once(c, g, f), c, g).valid);
}

TEST(EmbedStar, FallsBackOnDisconnectedDevice) {
  const Circuit c = families::bv(4);
  const CouplingGraph g(6, {{0, 1}, {2, 3}, {4, 5}});
  std::vector<std::string> warnings;
  const Mapping f = embed_star(c, g, &warnings);
  EXPECT_TRUE(injective_total(f));
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(InitialEmbedding, Dispatch) {
  const auto g = grid_device(4, 4);
  const Circuit line = families::ising(8);
  EXPECT_EQ(initial_embedding(line, g), embed_line(line, g));
  const Circuit star = families::swap_test(9);
  EXPECT_EQ(initial_embedding(star, g), embed_star(star, g));
  const Circuit dense = families::qft(7);
  EXPECT_EQ(initial_embedding(dense, g), embed_dense(dense, g));
  EXPECT_THROW(initial_embedding(line, CouplingGraph(9, {{0, 1}})), InfeasibleError);
}

TEST(InitialEmbedding, InjectiveAndDeterministicOnRandomCircuits) {
  const auto g = heavy_hex_device(2, 2);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (const Circuit& c : {families::random_circuit(20, 60, 0.7, seed), families::random_local(20, 40, 2, seed)}) {
      const Mapping a = initial_embedding(c, g);
      EXPECT_TRUE(injective_total(a));
      EXPECT_EQ(a, initial_embedding(c, g));
    }
  }
}

}  // namespace
}  // namespace mlsabre
