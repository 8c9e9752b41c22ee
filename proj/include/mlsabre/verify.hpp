#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mlsabre/circuit.hpp"
#include "mlsabre/device.hpp"
#include "mlsabre/router.hpp"

namespace mlsabre {

struct Violation {
  /// Offending gate id, or -1 for schedule-level problems.
  int gate = -1;
  std::string reason;
};

struct VerifyReport {
  bool valid = true;
  std::vector<Violation> violations;
  int swap_count = 0;
  int depth_unit = 0;
  int depth_cx3 = 0;
};

/// Replays a compiled schedule against the original circuit using only the
/// circuit, the device and the schedule itself.
inline VerifyReport verify(const CompiledCircuit& cc, const Circuit& c, const CouplingGraph& g) {
  VerifyReport rep;
  auto fail = [&](int gate, std::string reason) { rep.violations.push_back({gate, std::move(reason)}); };
  const int nq = c.num_qubits();
  const int np = g.num_physical();
  const std::vector<int>& start = cc.initial_mapping.forward();

  if (static_cast<int>(start.size()) != nq) {
    fail(-1, "mapping size mismatch");
    rep.valid = false;
    return rep;
  }
  std::vector<int> at(np, -1);
  for (int q = 0; q < nq; ++q) {
    const int p = start[q];
    if (p < 0 || p >= np || at[p] != -1) {
      fail(-1, "mapping not injective");
      rep.valid = false;
      return rep;
    }
    at[p] = q;
  }
  std::vector<int> where(start);

  const GateDag dag = dependency_dag(c);
  std::vector<char> done(c.size(), 0);
  std::vector<int> finish_unit(c.size(), 0), finish_cx3(c.size(), 0);
  std::vector<int> busy_unit(np, 0), busy_cx3(np, 0);

  for (const auto& entry : cc.schedule) {
    if (entry.is_swap()) {
      const int u = entry.edge.u;
      const int v = entry.edge.v;
      if (u < 0 || v < 0 || u >= np || v >= np || !g.adjacent(u, v)) {
        fail(-1, "swap on non-edge");
        continue;
      }
      ++rep.swap_count;
      busy_unit[u] = busy_unit[v] = std::max(busy_unit[u], busy_unit[v]) + 1;
      busy_cx3[u] = busy_cx3[v] = std::max(busy_cx3[u], busy_cx3[v]) + 3;
      std::swap(at[u], at[v]);
      if (at[u] >= 0) where[at[u]] = u;
      if (at[v] >= 0) where[at[v]] = v;
      continue;
    }
    const int id = entry.gate;
    if (id < 0 || id >= static_cast<int>(c.size())) {
      fail(id, "unknown gate");
      continue;
    }
    if (done[id]) {
      fail(id, "duplicate gate");
      continue;
    }
    const Gate& gate = c[id];
    for (int p : dag.predecessors[id]) {
      if (!done[p]) {
        fail(id, "order");
        break;
      }
    }
    if (gate.two_qubit() && !g.adjacent(where[gate.qubits[0]], where[gate.qubits[1]])) {
      fail(id, "non-adjacent operands");
    }
    done[id] = 1;
    int su = 0;
    int sc = 0;
    for (int p : dag.predecessors[id]) {
      su = std::max(su, finish_unit[p]);
      sc = std::max(sc, finish_cx3[p]);
    }
    for (int k = 0; k < gate.arity(); ++k) {
      su = std::max(su, busy_unit[where[gate.qubits[k]]]);
      sc = std::max(sc, busy_cx3[where[gate.qubits[k]]]);
    }
    const int cost = gate.kind == GateKind::Swap ? 3 : 1;
    finish_unit[id] = su + 1;
    finish_cx3[id] = sc + cost;
    for (int k = 0; k < gate.arity(); ++k) {
      busy_unit[where[gate.qubits[k]]] = finish_unit[id];
      busy_cx3[where[gate.qubits[k]]] = finish_cx3[id];
    }
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!done[i]) fail(static_cast<int>(i), "missing gate");
  }
  if (cc.final_mapping.forward() != where) fail(-1, "final mapping mismatch");

  for (int p = 0; p < np; ++p) {
    rep.depth_unit = std::max(rep.depth_unit, busy_unit[p]);
    rep.depth_cx3 = std::max(rep.depth_cx3, busy_cx3[p]);
  }
  rep.valid = rep.violations.empty();
  return rep;
}

}  // namespace mlsabre
