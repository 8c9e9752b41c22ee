#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlsabre {

/// Exact non-negative ratio num/den in lowest terms; den == 0 encodes infinity.
struct GapRatio {
  std::int64_t num = 1;
  std::int64_t den = 1;

  bool infinite() const noexcept { return den == 0; }
  double value() const noexcept {
    return infinite() ? std::numeric_limits<double>::infinity() : static_cast<double>(num) / static_cast<double>(den);
  }
  std::string str() const {
    return infinite() ? std::string("inf") : std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const GapRatio&, const GapRatio&) = default;
};

/// result / optimal. Values below one are returned as-is; they indicate a
/// bad oracle or generator rather than a better-than-optimal compiler.
inline GapRatio gap_ratio(std::int64_t result, std::int64_t optimal) {
  if (result < 0 || optimal < 0) throw std::invalid_argument("gap_ratio needs non-negative values");
  if (optimal == 0) return result == 0 ? GapRatio{1, 1} : GapRatio{1, 0};
  const std::int64_t g = std::gcd(result, optimal);
  return {result / g, optimal / g};
}

/// Arithmetic mean; infinite if any ratio is.
inline double mean_ratio(const std::vector<GapRatio>& ratios) {
  if (ratios.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : ratios) {
    if (r.infinite()) return std::numeric_limits<double>::infinity();
    sum += r.value();
  }
  return sum / static_cast<double>(ratios.size());
}

}  // namespace mlsabre
