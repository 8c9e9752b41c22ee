#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mlsabre/random.hpp"

namespace mlsabre {

/// Injective assignment of program qubits to physical qubits, with the
/// partial inverse kept in sync.
class Mapping {
 public:
  Mapping() = default;

  Mapping(std::vector<int> prog_to_phys, int num_physical) : forward_(std::move(prog_to_phys)) {
    if (static_cast<int>(forward_.size()) > num_physical) {
      throw std::invalid_argument("more program qubits than physical qubits");
    }
    inverse_.assign(num_physical, -1);
    for (std::size_t q = 0; q < forward_.size(); ++q) {
      const int p = forward_[q];
      if (p < 0 || p >= num_physical) throw std::out_of_range("mapping target out of range");
      if (inverse_[p] != -1) throw std::invalid_argument("mapping is not injective");
      inverse_[p] = static_cast<int>(q);
    }
  }

  static Mapping identity(int num_program, int num_physical) {
    std::vector<int> f(num_program);
    std::iota(f.begin(), f.end(), 0);
    return Mapping(std::move(f), num_physical);
  }

  /// Uniform random injection.
  static Mapping random(int num_program, int num_physical, Rng& rng) {
    std::vector<int> nodes(num_physical);
    std::iota(nodes.begin(), nodes.end(), 0);
    // Partial Fisher-Yates: only the first num_program slots are needed.
    for (int i = 0; i < num_program; ++i) {
      const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(num_physical - i)));
      std::swap(nodes[i], nodes[j]);
    }
    nodes.resize(num_program);
    return Mapping(std::move(nodes), num_physical);
  }

  int num_program() const noexcept { return static_cast<int>(forward_.size()); }
  int num_physical() const noexcept { return static_cast<int>(inverse_.size()); }

  int phys(int q) const { return forward_[q]; }
  /// Program qubit on physical qubit p, or -1.
  int prog(int p) const { return inverse_[p]; }

  const std::vector<int>& forward() const noexcept { return forward_; }
  const std::vector<int>& inverse() const noexcept { return inverse_; }

  /// Exchanges whatever occupies physical qubits a and b.
  void swap_physical(int a, int b) {
    const int qa = inverse_[a];
    const int qb = inverse_[b];
    inverse_[a] = qb;
    inverse_[b] = qa;
    if (qa >= 0) forward_[qa] = b;
    if (qb >= 0) forward_[qb] = a;
  }

  friend bool operator==(const Mapping& x, const Mapping& y) {
    return x.forward_ == y.forward_ && x.inverse_.size() == y.inverse_.size();
  }

 private:
  std::vector<int> forward_;
  std::vector<int> inverse_;
};

struct MappingHash {
  std::size_t operator()(const Mapping& m) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(m.num_physical());
    for (int p : m.forward()) h = mix_seed(h, static_cast<std::uint64_t>(p));
    return static_cast<std::size_t>(h);
  }
};

}  // namespace mlsabre
