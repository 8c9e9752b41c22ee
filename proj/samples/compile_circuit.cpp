// Compiles a QASM file (or a generated adder when no file is given) for a
// device and compares the multilevel result with plain best-of-N routing.
//
//   sample_compile [circuit.qasm] [device]

#include <fstream>
#include <iostream>
#include <sstream>

#include "mlsabre/mlsabre.hpp"

int main(int argc, char** argv) {
  using namespace mlsabre;
  try {
    Circuit c = families::adder(24);
    if (argc > 1) {
      std::ifstream in(argv[1]);
      if (!in) {
        std::cerr << "cannot read " << argv[1] << "\n";
        return 2;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      c = parse_qasm(ss.str());
    }
    CouplingGraph g = eagle127_device();
    if (argc > 2 && !preset_device(argv[2], g)) {
      std::ifstream in(argv[2]);
      std::stringstream ss;
      ss << in.rdbuf();
      g = parse_device(ss.str());
    }

    MlConfig cfg;
    cfg.cycles = 4;
    cfg.coarsest_trials = 100;
    cfg.interpolations = 20;
    const MlResult ml = ml_sabre(c, g, cfg);
    const RouteResult base = route_best_of(c, g, {}, 200);

    std::cout << "qubits " << c.num_qubits() << ", two-qubit gates " << c.num_two_qubit_gates() << "\n";
    std::cout << "ml-sabre: " << ml.compiled.swap_count << " swaps, depth " << ml.compiled.depth_unit << "\n";
    for (const auto& t : ml.trace) {
      std::cout << "  cycle " << t.cycle << ": " << t.swaps << " swaps" << (t.restarted ? " (restart)" : "") << "\n";
    }
    std::cout << "best-of-200: " << base.compiled.swap_count << " swaps, depth " << base.compiled.depth_unit << "\n";
    const auto rep = verify(ml.compiled, c, g);
    std::cout << "verified: " << (rep.valid ? "yes" : "no") << "\n";
    return rep.valid ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
