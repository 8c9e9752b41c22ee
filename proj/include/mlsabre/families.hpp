#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mlsabre/circuit.hpp"
#include "mlsabre/random.hpp"

// Structured circuit families with the interaction shapes of common
// benchmark programs: chains, hubs, all-to-all and local random.
namespace mlsabre::families {

namespace detail {

inline void require(int n, int minimum, const char* name) {
  if (n < minimum) throw std::invalid_argument(std::string(name) + " needs at least " + std::to_string(minimum) + " qubits");
}

/// Toffoli as 6 cx plus single-qubit gates.
inline void ccx(Circuit& c, int a, int b, int t) {
  c.add_one_qubit("h", t);
  c.add_two_qubit("cx", b, t);
  c.add_one_qubit("tdg", t);
  c.add_two_qubit("cx", a, t);
  c.add_one_qubit("t", t);
  c.add_two_qubit("cx", b, t);
  c.add_one_qubit("tdg", t);
  c.add_two_qubit("cx", a, t);
  c.add_one_qubit("t", b);
  c.add_one_qubit("t", t);
  c.add_one_qubit("h", t);
  c.add_two_qubit("cx", a, b);
  c.add_one_qubit("t", a);
  c.add_one_qubit("tdg", b);
  c.add_two_qubit("cx", a, b);
}

}  // namespace detail

inline Circuit ghz(int n) {
  detail::require(n, 2, "ghz");
  Circuit c(n);
  c.add_one_qubit("h", 0);
  for (int i = 0; i + 1 < n; ++i) c.add_two_qubit("cx", i, i + 1);
  return c;
}

/// Cat state prepared from the middle outwards along the chain.
inline Circuit cat(int n) {
  detail::require(n, 2, "cat");
  Circuit c(n);
  const int mid = n / 2;
  c.add_one_qubit("h", mid);
  for (int d = 1; mid - d >= 0 || mid + d - 1 < n - 1; ++d) {
    if (mid + d < n) c.add_two_qubit("cx", mid + d - 1, mid + d);
    if (mid - d >= 0) c.add_two_qubit("cx", mid - d + 1, mid - d);
  }
  return c;
}

/// Trotterised transverse-field Ising chain; zz terms as cx-rz-cx.
inline Circuit ising(int n, int steps = 2) {
  detail::require(n, 2, "ising");
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.add_one_qubit("h", q);
  for (int s = 0; s < steps; ++s) {
    for (int parity = 0; parity < 2; ++parity) {
      for (int i = parity; i + 1 < n; i += 2) {
        c.add_two_qubit("cx", i, i + 1);
        c.add_one_qubit("rz", i + 1, "0.1");
        c.add_two_qubit("cx", i, i + 1);
      }
    }
    for (int q = 0; q < n; ++q) c.add_one_qubit("rx", q, "0.2");
  }
  return c;
}

/// W state by a cascade of controlled rotations down the chain.
inline Circuit wstate(int n) {
  detail::require(n, 2, "wstate");
  Circuit c(n);
  c.add_one_qubit("x", 0);
  for (int i = 0; i + 1 < n; ++i) {
    c.add_one_qubit("ry", i + 1, "0.5");
    c.add_two_qubit("cz", i, i + 1);
    c.add_one_qubit("ry", i + 1, "-0.5");
    c.add_two_qubit("cx", i + 1, i);
  }
  return c;
}

/// Bernstein-Vazirani with an all-ones secret; the oracle qubit is the last one.
inline Circuit bv(int n) {
  detail::require(n, 2, "bv");
  Circuit c(n);
  const int anc = n - 1;
  c.add_one_qubit("x", anc);
  for (int q = 0; q < n; ++q) c.add_one_qubit("h", q);
  for (int q = 0; q < anc; ++q) c.add_two_qubit("cx", q, anc);
  for (int q = 0; q < anc; ++q) c.add_one_qubit("h", q);
  return c;
}

/// Swap test on two m-qubit registers: ancilla 0, registers 1..m and m+1..2m.
inline Circuit swap_test(int n) {
  detail::require(n, 3, "swap_test");
  if (n % 2 == 0) throw std::invalid_argument("swap_test needs an odd qubit count");
  const int m = (n - 1) / 2;
  Circuit c(n);
  c.add_one_qubit("h", 0);
  for (int i = 0; i < m; ++i) {
    const int a = 1 + i;
    const int b = 1 + m + i;
    c.add_two_qubit("cx", b, a);
    detail::ccx(c, 0, a, b);
    c.add_two_qubit("cx", b, a);
  }
  c.add_one_qubit("h", 0);
  return c;
}

/// QFT with controlled phases as cx-rz-cx; every pair interacts.
inline Circuit qft(int n) {
  detail::require(n, 2, "qft");
  Circuit c(n);
  for (int i = 0; i < n; ++i) {
    c.add_one_qubit("h", i);
    for (int j = i + 1; j < n; ++j) {
      c.add_two_qubit("cx", j, i);
      c.add_one_qubit("rz", i, "0.3");
      c.add_two_qubit("cx", j, i);
    }
  }
  return c;
}

/// Ripple-carry adder on two k-bit registers (n = 2k + 2): carry-in 0,
/// interleaved b_i = 1 + 2i and a_i = 2 + 2i, carry-out n - 1.
inline Circuit adder(int n) {
  detail::require(n, 4, "adder");
  if (n % 2 != 0) throw std::invalid_argument("adder needs an even qubit count");
  const int k = (n - 2) / 2;
  Circuit c(n);
  auto bq = [](int i) { return 1 + 2 * i; };
  auto aq = [](int i) { return 2 + 2 * i; };
  auto maj = [&](int x, int y, int z) {
    c.add_two_qubit("cx", z, y);
    c.add_two_qubit("cx", z, x);
    detail::ccx(c, x, y, z);
  };
  auto uma = [&](int x, int y, int z) {
    detail::ccx(c, x, y, z);
    c.add_two_qubit("cx", z, x);
    c.add_two_qubit("cx", x, y);
  };
  for (int i = 0; i < k; ++i) c.add_one_qubit("x", aq(i));
  maj(0, bq(0), aq(0));
  for (int i = 1; i < k; ++i) maj(aq(i - 1), bq(i), aq(i));
  c.add_two_qubit("cx", aq(k - 1), n - 1);
  for (int i = k - 1; i >= 1; --i) uma(aq(i - 1), bq(i), aq(i));
  uma(0, bq(0), aq(0));
  return c;
}

/// Random two-qubit gates between qubits at most `radius` apart in index order.
inline Circuit random_local(int n, int gates, int radius, std::uint64_t seed) {
  detail::require(n, 2, "random_local");
  if (radius < 1) throw std::invalid_argument("radius must be >= 1");
  Rng rng(seed);
  Circuit c(n);
  for (int i = 0; i < gates; ++i) {
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int b;
    do {
      const int off = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(radius)));
      b = rng.below(2) ? a + off : a - off;
    } while (b < 0 || b >= n);
    if (rng.below(3) == 0) c.add_one_qubit("t", a);
    c.add_two_qubit("cx", a, b);
  }
  return c;
}

/// Uniformly random gates over all pairs.
inline Circuit random_circuit(int n, int gates, double two_qubit_fraction, std::uint64_t seed) {
  detail::require(n, 1, "random_circuit");
  Rng rng(seed);
  Circuit c(n);
  for (int i = 0; i < gates; ++i) {
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (n >= 2 && rng.unit() < two_qubit_fraction) {
      int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (b >= a) ++b;
      c.add_two_qubit("cx", a, b);
    } else {
      c.add_one_qubit("h", a);
    }
  }
  return c;
}

/// Builds a family member from a name: ghz, cat, ising, wstate, bv,
/// swaptest, qft, adder, randlocal.
inline Circuit by_name(std::string_view name, int n, std::uint64_t seed = 0) {
  if (name == "ghz") return ghz(n);
  if (name == "cat") return cat(n);
  if (name == "ising") return ising(n);
  if (name == "wstate") return wstate(n);
  if (name == "bv") return bv(n);
  if (name == "swaptest") return swap_test(n);
  if (name == "qft") return qft(n);
  if (name == "adder") return adder(n);
  if (name == "randlocal") return random_local(n, 4 * n, 3, seed);
  throw std::invalid_argument("unknown circuit family '" + std::string(name) + "'");
}

}  // namespace mlsabre::families
