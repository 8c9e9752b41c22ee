#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "mlsabre/circuit.hpp"
#include "mlsabre/device.hpp"
#include "mlsabre/error.hpp"

namespace mlsabre {

struct OracleLimits {
  int max_physical = 7;
  int max_two_qubit_gates = 15;
};

/// Exact minimum swap count over all initial mappings and schedules.
///
/// States are (placement, executed two-qubit gates), searched breadth-first
/// by swap count. After every swap all gates that have become executable are
/// run, since executing an available gate early never costs a swap. The
/// search starts from every injective placement at once.
inline int oracle_optimal_swaps(const Circuit& c, const CouplingGraph& g, OracleLimits limits = {}) {
  const int np = g.num_physical();
  const int nq = c.num_qubits();
  if (np > limits.max_physical || np > 8) {
    throw std::invalid_argument("oracle limited to " + std::to_string(limits.max_physical) + " physical qubits");
  }
  if (nq > np) throw InfeasibleError("more program qubits than physical qubits");

  // Two-qubit gates and their two-qubit ancestors (through any dependency).
  const GateDag dag = dependency_dag(c);
  std::vector<int> two_index(c.size(), -1);
  std::vector<std::array<int, 2>> ops;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].two_qubit()) {
      two_index[i] = static_cast<int>(ops.size());
      ops.push_back(c[i].qubits);
    }
  }
  const int m = static_cast<int>(ops.size());
  if (m > limits.max_two_qubit_gates || m > 31) {
    throw std::invalid_argument("oracle limited to " + std::to_string(limits.max_two_qubit_gates) +
                                " two-qubit gates");
  }
  if (m == 0) return 0;
  if (!g.connected()) throw InfeasibleError("coupling graph is disconnected");

  std::vector<std::uint32_t> reach(c.size(), 0);
  std::vector<std::uint32_t> needs(m, 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::uint32_t r = 0;
    for (int p : dag.predecessors[i]) {
      r |= reach[p];
      if (two_index[p] >= 0) r |= 1u << two_index[p];
    }
    reach[i] = r;
    if (two_index[i] >= 0) needs[two_index[i]] = r;
  }
  const std::uint32_t all = m == 32 ? ~0u : ((1u << m) - 1);

  // Placement packed as 4 bits per physical qubit holding program index or 15.
  using State = std::uint64_t;
  auto prog_at = [](State s, int p) { return static_cast<int>((s >> (32 + 4 * p)) & 0xF); };
  auto pack = [](std::uint64_t placement, std::uint32_t mask) { return (placement << 32) | mask; };

  auto close = [&](State s) {
    std::uint64_t placement = s >> 32;
    std::uint32_t mask = static_cast<std::uint32_t>(s);
    int where[16];
    for (int p = 0; p < np; ++p) {
      const int q = static_cast<int>((placement >> (4 * p)) & 0xF);
      if (q < 15) where[q] = p;
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (int j = 0; j < m; ++j) {
        if ((mask >> j) & 1u) continue;
        if ((needs[j] & mask) != needs[j]) continue;
        if (!g.adjacent(where[ops[j][0]], where[ops[j][1]])) continue;
        mask |= 1u << j;
        changed = true;
      }
    }
    return pack(placement, mask);
  };

  std::unordered_set<State> seen;
  std::vector<State> layer;
  // Enumerate injective placements by recursion over program qubits.
  std::vector<int> used(np, 0);
  std::vector<int> assign(nq);
  auto enumerate = [&](auto&& self, int q) -> void {
    if (q == nq) {
      std::uint64_t placement = 0;
      for (int p = 0; p < np; ++p) placement |= std::uint64_t{15} << (4 * p);
      for (int k = 0; k < nq; ++k) {
        placement &= ~(std::uint64_t{15} << (4 * assign[k]));
        placement |= static_cast<std::uint64_t>(k) << (4 * assign[k]);
      }
      const State s = close(pack(placement, 0));
      if (seen.insert(s).second) layer.push_back(s);
      return;
    }
    for (int p = 0; p < np; ++p) {
      if (used[p]) continue;
      used[p] = 1;
      assign[q] = p;
      self(self, q + 1);
      used[p] = 0;
    }
  };
  enumerate(enumerate, 0);

  for (int swaps = 0;; ++swaps) {
    std::vector<State> next;
    for (State s : layer) {
      if (static_cast<std::uint32_t>(s) == all) return swaps;
    }
    for (State s : layer) {
      const std::uint64_t placement = s >> 32;
      for (const Edge& e : g.edges()) {
        const int a = prog_at(s, e.u);
        const int b = prog_at(s, e.v);
        if (a == 15 && b == 15) continue;
        std::uint64_t moved = placement;
        moved &= ~((std::uint64_t{15} << (4 * e.u)) | (std::uint64_t{15} << (4 * e.v)));
        moved |= (static_cast<std::uint64_t>(b) << (4 * e.u)) | (static_cast<std::uint64_t>(a) << (4 * e.v));
        const State t = close(pack(moved, static_cast<std::uint32_t>(s)));
        if (seen.insert(t).second) next.push_back(t);
      }
    }
    layer = std::move(next);
  }
}

}  // namespace mlsabre
