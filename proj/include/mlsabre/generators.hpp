#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlsabre/circuit.hpp"
#include "mlsabre/device.hpp"
#include "mlsabre/error.hpp"
#include "mlsabre/mapping.hpp"
#include "mlsabre/oracle.hpp"
#include "mlsabre/random.hpp"
#include "mlsabre/router.hpp"

namespace mlsabre {

enum class Metric { Depth, SwapCount };

/// Benchmark with a witness solution achieving `known_value`.
struct KnownOptBenchmark {
  Circuit circuit;
  CouplingGraph device;
  Metric metric = Metric::Depth;
  int known_value = 0;
  CompiledCircuit witness;
  /// Program qubit carrying the serial chain of length known_value (Depth only).
  int chain_qubit = -1;
  /// known_value was confirmed optimal by the exact oracle.
  bool certified = false;
};

namespace detail {

/// Random physical relabelling: physical p hosts program label[p].
inline std::vector<int> random_labels(int n, Rng& rng) {
  std::vector<int> label(n);
  std::iota(label.begin(), label.end(), 0);
  rng.shuffle(label);
  return label;
}

inline CompiledCircuit finish_witness(const Circuit& c, const Mapping& initial, std::vector<ScheduleEntry> schedule) {
  CompiledCircuit w;
  w.initial_mapping = initial;
  Mapping m = initial;
  for (const auto& e : schedule) {
    if (e.is_swap()) {
      m.swap_physical(e.edge.u, e.edge.v);
      ++w.swap_count;
    }
  }
  w.final_mapping = m;
  const GateDag dag = dependency_dag(c);
  w.depth_unit = schedule_depth(c, dag, initial, schedule, SwapModel::Unit);
  w.depth_cx3 = schedule_depth(c, dag, initial, schedule, SwapModel::Cx3);
  w.schedule = std::move(schedule);
  return w;
}

}  // namespace detail

/// Layered circuit with known optimal depth. Layer t draws a random matching
/// of coupling edges with round((t+1)x) - round(tx) edges, x = density *
/// floor(n/2), so the gate count tracks density exactly over many layers. A
/// spine qubit gets a gate in every layer, which makes depth_opt a
/// mapping-invariant lower bound; the identity placement before relabelling
/// achieves it with no swaps.
inline KnownOptBenchmark gen_queko(const CouplingGraph& g, int depth_opt, double density, std::uint64_t seed) {
  if (depth_opt < 1) throw std::invalid_argument("depth_opt must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("density must lie in (0, 1]");
  const int n = g.num_physical();
  if (n < 2 || g.num_edges() == 0) throw std::invalid_argument("device needs at least one edge");
  Rng rng(seed);
  const std::vector<int> label = detail::random_labels(n, rng);
  const int spine = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  const double x = density * static_cast<double>(n / 2);

  Circuit c(n);
  std::vector<Edge> edges = g.edges();
  std::vector<char> busy(n);
  for (int t = 0; t < depth_opt; ++t) {
    const long target = std::lround((t + 1) * x) - std::lround(t * x);
    std::fill(busy.begin(), busy.end(), 0);
    rng.shuffle(edges);
    long placed = 0;
    for (const Edge& e : edges) {
      if (placed >= target) break;
      if (busy[e.u] || busy[e.v]) continue;
      busy[e.u] = busy[e.v] = 1;
      c.add_two_qubit("cx", label[e.u], label[e.v]);
      ++placed;
    }
    if (!busy[spine]) c.add_one_qubit("x", label[spine]);
  }

  std::vector<int> forward(n);
  for (int p = 0; p < n; ++p) forward[label[p]] = p;
  const Mapping witness_map(std::move(forward), n);
  std::vector<ScheduleEntry> schedule;
  for (std::size_t i = 0; i < c.size(); ++i) schedule.push_back({static_cast<int>(i), {}});

  KnownOptBenchmark b;
  b.witness = detail::finish_witness(c, witness_map, std::move(schedule));
  b.circuit = std::move(c);
  b.device = g;
  b.metric = Metric::Depth;
  b.known_value = depth_opt;
  b.chain_qubit = label[spine];
  return b;
}

/// Circuit with a witness routing of exactly `swaps_opt` swaps: blocks of
/// gates on coupling edges under the current placement, separated by hidden
/// swaps. Each swap is on an edge whose endpoints have different
/// neighbourhoods, and never repeats the previous swap. Blocks cover every
/// coupling edge when max_gates allows, otherwise random edge subsets.
/// known_value is an upper bound on the optimum.
inline KnownOptBenchmark gen_qubikos(const CouplingGraph& g, int swaps_opt, int max_gates, std::uint64_t seed) {
  if (swaps_opt < 0) throw std::invalid_argument("swaps_opt must be >= 0");
  const int n = g.num_physical();
  const int m = static_cast<int>(g.num_edges());
  if (m == 0) throw std::invalid_argument("device needs at least one edge");
  const int blocks = swaps_opt + 1;
  const int per_block = std::min(m, max_gates / blocks);
  if (per_block < 1) {
    throw std::invalid_argument("cannot fit " + std::to_string(blocks) + " blocks within " +
                                std::to_string(max_gates) + " gates");
  }

  std::vector<int> swappable;
  for (int i = 0; i < m; ++i) {
    const Edge e = g.edges()[i];
    std::vector<int> nu, nv;
    for (int w : g.neighbors(e.u)) {
      if (w != e.v) nu.push_back(w);
    }
    for (int w : g.neighbors(e.v)) {
      if (w != e.u) nv.push_back(w);
    }
    if (nu != nv) swappable.push_back(i);
  }
  if (swaps_opt > 0 && swappable.empty()) throw std::invalid_argument("device has no usable swap edge");

  Rng rng(seed);
  const std::vector<int> label = detail::random_labels(n, rng);
  std::vector<int> forward(n);
  for (int p = 0; p < n; ++p) forward[label[p]] = p;
  Mapping place(std::move(forward), n);
  const Mapping initial = place;

  Circuit c(n);
  std::vector<ScheduleEntry> schedule;
  std::vector<Edge> edges = g.edges();
  int last_swap = -1;
  for (int b = 0; b < blocks; ++b) {
    rng.shuffle(edges);
    for (int i = 0; i < per_block; ++i) {
      const Edge e = edges[i];
      const int id = c.add_two_qubit("cx", place.prog(e.u), place.prog(e.v));
      schedule.push_back({id, {}});
    }
    if (b + 1 == blocks) break;
    int pick;
    do {
      pick = swappable[rng.below(swappable.size())];
    } while (pick == last_swap && swappable.size() > 1);
    last_swap = pick;
    const Edge e = g.edges()[pick];
    place.swap_physical(e.u, e.v);
    schedule.push_back({-1, e});
  }

  KnownOptBenchmark bench;
  bench.witness = detail::finish_witness(c, initial, std::move(schedule));
  bench.circuit = std::move(c);
  bench.device = g;
  bench.metric = Metric::SwapCount;
  bench.known_value = swaps_opt;
  return bench;
}

/// QUBIKOS-style instance whose witness count the exact oracle confirms as
/// optimal. Instances that fail the check are regenerated from derived seeds;
/// throws if none of `attempts` tries is confirmed. Only oracle-sized inputs.
inline KnownOptBenchmark gen_qubikos_certified(const CouplingGraph& g, int swaps_opt, int max_gates,
                                               std::uint64_t seed, int attempts = 20, OracleLimits limits = {}) {
  for (int a = 0; a < attempts; ++a) {
    KnownOptBenchmark b = gen_qubikos(g, swaps_opt, max_gates, a == 0 ? seed : mix_seed(seed, a));
    if (oracle_optimal_swaps(b.circuit, b.device, limits) == swaps_opt) {
      b.certified = true;
      return b;
    }
  }
  throw Error("no certified instance within " + std::to_string(attempts) + " attempts");
}

}  // namespace mlsabre
