#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mlsabre/assignment.hpp"
#include "mlsabre/circuit.hpp"
#include "mlsabre/device.hpp"
#include "mlsabre/embedding.hpp"
#include "mlsabre/mapping.hpp"
#include "mlsabre/matching.hpp"
#include "mlsabre/random.hpp"
#include "mlsabre/router.hpp"

namespace mlsabre {

/// Links a fine level to the coarse level built from it.
struct ClusterMap {
  std::vector<int> prog_to_coarse;
  std::vector<int> phys_to_coarse;
  /// Fine members of each coarse program / physical qubit, ascending.
  std::vector<std::vector<int>> prog_members;
  std::vector<std::vector<int>> phys_members;
};

struct Level {
  Circuit circuit;
  CouplingGraph graph;
  Mapping mapping;
  /// Clustering that produced this level from the next-finer one.
  std::optional<ClusterMap> clusters;
};

struct MlConfig {
  int cycles = 10;
  int coarsest_trials = 500;
  int interpolations = 100;
  int random_trials_per_level = 1;
  std::uint64_t seed = 0;
  RouterConfig router;
  int jobs = 1;

  void validate() const {
    if (cycles < 1) throw std::invalid_argument("cycles must be >= 1");
    if (interpolations < 1) throw std::invalid_argument("interpolations must be >= 1");
    if (coarsest_trials < 0) throw std::invalid_argument("coarsest_trials must be >= 0");
    if (random_trials_per_level < 0) throw std::invalid_argument("random_trials_per_level must be >= 0");
    router.validate();
  }
};

inline bool is_embeddable(const Circuit& c, const CouplingGraph& g, const Mapping& f) {
  for (const Gate& gate : c.gates()) {
    if (gate.two_qubit() && !g.adjacent(f.phys(gate.qubits[0]), f.phys(gate.qubits[1]))) return false;
  }
  return true;
}

/// One round of co-clustering. Coupling edges are weighted by how often the
/// program qubits they host interact, then contracted along a
/// maximum-cardinality maximum-weight matching. Occupied coarse qubits are
/// labelled first, by smallest fine program qubit, so the coarse mapping is
/// the identity.
inline std::pair<Level, ClusterMap> coarsen(const Circuit& c, const CouplingGraph& g, const Mapping& f) {
  const InteractionGraph ig = interaction_graph(c);
  const int np = g.num_physical();
  WeightedGraph wg{np, {}};
  wg.edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) {
    const int a = f.prog(e.u);
    const int b = f.prog(e.v);
    wg.edges.push_back({e.u, e.v, (a >= 0 && b >= 0) ? ig.weight(a, b) : 0});
  }
  const Matching matching = max_card_max_weight_matching(wg);

  // Physical clusters keyed by their smallest member.
  std::vector<std::vector<int>> clusters;
  for (int p = 0; p < np; ++p) {
    const int m = matching.mate[p];
    if (m >= 0 && m < p) continue;
    clusters.push_back(m >= 0 ? std::vector<int>{p, m} : std::vector<int>{p});
  }
  struct Key {
    bool empty;
    int first;
    std::size_t cluster;
  };
  std::vector<Key> keys;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    int first_prog = std::numeric_limits<int>::max();
    for (int p : clusters[i]) {
      if (f.prog(p) >= 0) first_prog = std::min(first_prog, f.prog(p));
    }
    const bool empty = first_prog == std::numeric_limits<int>::max();
    keys.push_back({empty, empty ? clusters[i][0] : first_prog, i});
  }
  std::sort(keys.begin(), keys.end(),
            [](const Key& a, const Key& b) { return std::tie(a.empty, a.first) < std::tie(b.empty, b.first); });

  ClusterMap cm;
  cm.prog_to_coarse.assign(c.num_qubits(), -1);
  cm.phys_to_coarse.assign(np, -1);
  for (const Key& k : keys) {
    const int label = static_cast<int>(cm.phys_members.size());
    cm.phys_members.push_back(clusters[k.cluster]);
    std::vector<int> progs;
    for (int p : clusters[k.cluster]) {
      cm.phys_to_coarse[p] = label;
      if (f.prog(p) >= 0) progs.push_back(f.prog(p));
    }
    if (!progs.empty()) {
      std::sort(progs.begin(), progs.end());
      for (int q : progs) cm.prog_to_coarse[q] = label;
      cm.prog_members.push_back(std::move(progs));
    }
  }

  const int nq_coarse = static_cast<int>(cm.prog_members.size());
  const int np_coarse = static_cast<int>(cm.phys_members.size());
  Circuit coarse(nq_coarse);
  for (const Gate& gate : c.gates()) {
    if (!gate.two_qubit()) continue;
    const int a = cm.prog_to_coarse[gate.qubits[0]];
    const int b = cm.prog_to_coarse[gate.qubits[1]];
    if (a == b) continue;
    Gate copy = gate;
    copy.qubits = {a, b};
    coarse.add(std::move(copy));
  }
  std::vector<std::pair<int, int>> edges;
  for (const Edge& e : g.edges()) {
    const int a = cm.phys_to_coarse[e.u];
    const int b = cm.phys_to_coarse[e.v];
    if (a != b) edges.emplace_back(a, b);
  }
  Level level{std::move(coarse), CouplingGraph(np_coarse, std::move(edges)), Mapping::identity(nq_coarse, np_coarse),
              cm};
  return {std::move(level), std::move(cm)};
}

struct Hierarchy {
  /// levels[0] is the finest; levels.back() is the coarsest to solve.
  std::vector<Level> levels;
  /// The finest level was already embeddable; nothing to solve.
  bool finest_embeddable = false;
  /// Coarsening stalled (empty matching) before reaching an embeddable level.
  bool stalled = false;
};

inline Hierarchy build_hierarchy(const Circuit& c, const CouplingGraph& g, const Mapping& f) {
  Hierarchy h;
  h.levels.push_back({c, g, f, std::nullopt});
  if (is_embeddable(c, g, f)) {
    h.finest_embeddable = true;
    return h;
  }
  while (true) {
    const Level& top = h.levels.back();
    auto [next, cm] = coarsen(top.circuit, top.graph, top.mapping);
    if (next.graph.num_physical() == top.graph.num_physical()) {
      h.stalled = true;
      return h;
    }
    const bool done = is_embeddable(next.circuit, next.graph, next.mapping);
    if (done) return h;  // The embeddable level itself is discarded.
    h.levels.push_back(std::move(next));
  }
}

/// Uses the level's own (trivial) mapping as an extra seed trial.
inline RouteResult coarsest_solve(const Level& level, const MlConfig& cfg, std::uint64_t seed) {
  RouterConfig rc = cfg.router;
  rc.seed = seed;
  return route_best_of(level.circuit, level.graph, {level.mapping}, cfg.coarsest_trials, rc, cfg.jobs);
}

/// Projects a coarse mapping onto the fine level. Placing a program qubit on
/// a physical qubit costs the distance from that qubit to the nearest member
/// of the cluster hosting the program qubit's coarse image.
inline std::vector<Mapping> interpolate(const Level& fine, const Mapping& coarse_mapping, const ClusterMap& cm, int k,
                                        std::uint64_t seed) {
  const int nq = fine.circuit.num_qubits();
  const int np = fine.graph.num_physical();
  CostMatrix<std::int64_t> cost(nq, np);
  for (int q = 0; q < nq; ++q) {
    const auto& members = cm.phys_members[coarse_mapping.phys(cm.prog_to_coarse[q])];
    for (int p = 0; p < np; ++p) {
      int d = std::numeric_limits<int>::max();
      for (int m : members) d = std::min(d, fine.graph.distance(p, m));
      cost.at(q, p) = d;
    }
  }
  std::vector<Mapping> out;
  for (auto& a : k_diverse_optimal_assignments(cost, k, seed)) out.emplace_back(std::move(a.col_for_row), np);
  return out;
}

inline RouteResult refine(const Level& level, const std::vector<Mapping>& seeds, const MlConfig& cfg,
                          std::uint64_t seed) {
  std::vector<Mapping> unique;
  std::unordered_set<Mapping, MappingHash> seen;
  for (const auto& m : seeds) {
    if (seen.insert(m).second) unique.push_back(m);
  }
  RouterConfig rc = cfg.router;
  rc.seed = seed;
  return route_best_of(level.circuit, level.graph, unique, cfg.random_trials_per_level, rc, cfg.jobs);
}

struct CycleTrace {
  int cycle = 0;
  int swaps = 0;
  int depth = 0;
  int best_swaps = 0;
  bool restarted = false;
};

struct MlResult {
  CompiledCircuit compiled;
  /// Cycle 0 is routing straight from the initial embedding.
  std::vector<CycleTrace> trace;
  std::vector<Mapping> visited;
  /// (cycle, fresh mapping) for every random restart.
  std::vector<std::pair<int, Mapping>> restarts;
  std::vector<std::string> warnings;
  int best_cycle = 0;
};

/// Multilevel driver: embed, then per cycle coarsen until embeddable, solve
/// the coarsest non-embeddable level and interpolate/refine back down; keep
/// the best result and restart from a fresh random mapping when a cycle
/// returns to an already-visited mapping.
inline MlResult ml_sabre(const Circuit& c, const CouplingGraph& g, const MlConfig& cfg = {}) {
  cfg.validate();
  detail::check_routable(c, g);
  MlResult result;
  const int nq = c.num_qubits();
  const int np = g.num_physical();
  auto stage_seed = [&](int cycle, int level, int purpose) {
    return mix_seed(cfg.seed, {static_cast<std::uint64_t>(cycle), static_cast<std::uint64_t>(level),
                               static_cast<std::uint64_t>(purpose)});
  };
  auto better = [](const CompiledCircuit& a, const CompiledCircuit& b) {
    return std::tie(a.swap_count, a.depth_unit) < std::tie(b.swap_count, b.depth_unit);
  };

  Mapping f = initial_embedding(c, g, &result.warnings);
  {
    RouterConfig rc = cfg.router;
    rc.seed = stage_seed(0, 0, 0);
    auto r = route_best_of(c, g, {f}, 0, rc, cfg.jobs);
    result.compiled = std::move(r.compiled);
    result.trace.push_back({0, result.compiled.swap_count, result.compiled.depth_unit, result.compiled.swap_count, false});
  }

  std::unordered_set<Mapping, MappingHash> visited;
  Rng restart_rng(stage_seed(-1, 0, 1));
  for (int cycle = 1; cycle <= cfg.cycles; ++cycle) {
    Hierarchy h = build_hierarchy(c, g, f);
    RouteResult r;
    if (h.finest_embeddable) {
      RouterConfig rc = cfg.router;
      rc.seed = stage_seed(cycle, 0, 0);
      r = route_best_of(c, g, {f}, 0, rc, cfg.jobs);
    } else {
      const int top = static_cast<int>(h.levels.size()) - 1;
      r = coarsest_solve(h.levels[top], cfg, stage_seed(cycle, top, 0));
      for (int i = top; i >= 1; --i) {
        const auto seeds = interpolate(h.levels[i - 1], r.mapping, *h.levels[i].clusters, cfg.interpolations,
                                       stage_seed(cycle, i, 1));
        r = refine(h.levels[i - 1], seeds, cfg, stage_seed(cycle, i - 1, 2));
      }
      if (top == 0) r = refine(h.levels[0], {r.mapping}, cfg, stage_seed(cycle, 0, 2));
    }

    if (better(r.compiled, result.compiled)) {
      result.compiled = r.compiled;
      result.best_cycle = cycle;
    }
    bool restarted = false;
    const Mapping reached = r.mapping;
    if (visited.count(reached)) {
      restarted = true;
      Mapping fresh = Mapping::random(nq, np, restart_rng);
      int draws = 1;
      while (visited.count(fresh) && draws < 100) {
        fresh = Mapping::random(nq, np, restart_rng);
        ++draws;
      }
      if (visited.count(fresh)) {
        result.warnings.push_back("cycle " + std::to_string(cycle) + ": restart mapping repeats a visited mapping");
      }
      result.restarts.emplace_back(cycle, fresh);
      f = std::move(fresh);
    } else {
      f = reached;
    }
    if (visited.insert(reached).second) result.visited.push_back(reached);
    result.trace.push_back({cycle, r.compiled.swap_count, r.compiled.depth_unit, result.compiled.swap_count, restarted});
  }
  return result;
}

}  // namespace mlsabre
