#pragma once

#include <sstream>
#include <string>

#include "mlsabre/circuit.hpp"
#include "mlsabre/qasm.hpp"
#include "mlsabre/router.hpp"

namespace mlsabre {

/// Routed circuit over the physical register. The initial placement is
/// recorded in a leading comment; barriers of the input are not repeated.
inline std::string compiled_qasm(const CompiledCircuit& cc, const Circuit& c, SwapModel model = SwapModel::Unit) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  os << "// initial mapping:";
  for (int q = 0; q < cc.initial_mapping.num_program(); ++q) os << ' ' << cc.initial_mapping.phys(q);
  os << "\nqreg q[" << cc.initial_mapping.num_physical() << "];\n";
  Mapping m = cc.initial_mapping;
  for (const auto& e : cc.schedule) {
    if (e.is_swap()) {
      detail::write_swap(os, e.edge.u, e.edge.v, model);
      m.swap_physical(e.edge.u, e.edge.v);
      continue;
    }
    const Gate& g = c[e.gate];
    const int a = m.phys(g.qubits[0]);
    const int b = g.arity() == 2 ? m.phys(g.qubits[1]) : -1;
    if (g.kind == GateKind::Swap) {
      detail::write_swap(os, a, b, model);
    } else {
      detail::write_gate(os, g.name, g.params, a, b);
    }
  }
  return os.str();
}

}  // namespace mlsabre
