#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlsabre/error.hpp"
#include "mlsabre/random.hpp"

namespace mlsabre {

/// Dense rows x cols cost matrix, rows <= cols. Entries equal to `forbidden`
/// (when set) mark disallowed pairs.
template <typename T>
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    if (rows > cols) throw std::invalid_argument("cost matrix needs rows <= cols");
  }
  CostMatrix(std::vector<std::vector<T>> nested) {
    rows_ = static_cast<int>(nested.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(nested[0].size());
    if (rows_ > cols_) throw std::invalid_argument("cost matrix needs rows <= cols");
    for (const auto& row : nested) {
      if (static_cast<int>(row.size()) != cols_) throw std::invalid_argument("ragged cost matrix");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  T& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const T& at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  const std::optional<T>& forbidden() const noexcept { return forbidden_; }
  void set_forbidden(T sentinel) { forbidden_ = sentinel; }
  bool allowed(int r, int c) const { return !forbidden_ || at(r, c) != *forbidden_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
  std::optional<T> forbidden_;
};

template <typename T>
struct Assignment {
  /// Column assigned to each row.
  std::vector<int> col_for_row;
  T cost{};
};

/// Shortest augmenting path solver of the Jonker-Volgenant family for
/// rectangular problems: one Dijkstra-like search per row over reduced
/// costs, with dual updates keeping reduced costs non-negative.
template <typename T>
Assignment<T> solve_linear_assignment(const CostMatrix<T>& c) {
  const int nr = c.rows();
  const int nc = c.cols();
  constexpr T kInf = std::numeric_limits<T>::has_infinity ? std::numeric_limits<T>::infinity()
                                                          : std::numeric_limits<T>::max();
  std::vector<T> u(nr, T{}), v(nc, T{}), spc(nc);
  std::vector<int> path(nc, -1), col4row(nr, -1), row4col(nc, -1), remaining(nc);
  std::vector<char> sr(nr), sc(nc);

  for (int cur = 0; cur < nr; ++cur) {
    T min_val{};
    int num_remaining = nc;
    for (int it = 0; it < nc; ++it) remaining[it] = nc - it - 1;
    std::fill(sr.begin(), sr.end(), 0);
    std::fill(sc.begin(), sc.end(), 0);
    std::fill(spc.begin(), spc.end(), kInf);
    int sink = -1;
    int i = cur;
    while (sink == -1) {
      int index = -1;
      T lowest = kInf;
      sr[i] = 1;
      for (int it = 0; it < num_remaining; ++it) {
        const int j = remaining[it];
        if (c.allowed(i, j)) {
          const T r = min_val + c.at(i, j) - u[i] - v[j];
          if (r < spc[j]) {
            path[j] = i;
            spc[j] = r;
          }
        }
        if (spc[j] < lowest || (spc[j] == lowest && spc[j] != kInf && row4col[j] == -1)) {
          lowest = spc[j];
          index = it;
        }
      }
      min_val = lowest;
      if (index == -1 || min_val == kInf) {
        throw InfeasibleError("assignment infeasible at row " + std::to_string(cur));
      }
      const int j = remaining[index];
      if (row4col[j] == -1) {
        sink = j;
      } else {
        i = row4col[j];
      }
      sc[j] = 1;
      remaining[index] = remaining[--num_remaining];
    }
    u[cur] += min_val;
    for (int r = 0; r < nr; ++r) {
      if (sr[r] && r != cur) u[r] += min_val - spc[col4row[r]];
    }
    for (int j = 0; j < nc; ++j) {
      if (sc[j]) v[j] -= min_val - spc[j];
    }
    int j = sink;
    while (true) {
      const int r = path[j];
      row4col[j] = r;
      std::swap(col4row[r], j);
      if (r == cur) break;
    }
  }
  Assignment<T> result;
  result.col_for_row = std::move(col4row);
  for (int r = 0; r < nr; ++r) result.cost += c.at(r, result.col_for_row[r]);
  return result;
}

/// Up to k distinct minimum-cost assignments. The first is the exact optimum;
/// others come from re-solving with seeded noise small enough that the sum of
/// all perturbations stays below one, so any perturbed optimum is also an
/// unperturbed optimum (checked anyway). Search stops after k results, after
/// a streak of max(8, k/4) duplicates, or after 4k + 8 attempts.
inline std::vector<Assignment<std::int64_t>> k_diverse_optimal_assignments(const CostMatrix<std::int64_t>& c,
                                                                           int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  std::vector<Assignment<std::int64_t>> out;
  out.push_back(solve_linear_assignment(c));
  const std::int64_t optimum = out.front().cost;
  if (k == 1 || c.rows() == 0) return out;

  std::int64_t max_cost = 1;
  for (int r = 0; r < c.rows(); ++r) {
    for (int col = 0; col < c.cols(); ++col) {
      if (c.allowed(r, col)) max_cost = std::max(max_cost, c.at(r, col));
    }
  }
  const double eps = 0.5 / (static_cast<double>(c.rows()) * c.cols() * static_cast<double>(max_cost) + 1.0);

  std::set<std::vector<int>> seen{out.front().col_for_row};
  CostMatrix<double> noisy(c.rows(), c.cols());
  constexpr double kForbidden = -1.0;
  if (c.forbidden()) noisy.set_forbidden(kForbidden);
  Rng rng(seed);

  const int streak_limit = std::max(8, k / 4);
  const int max_attempts = 4 * k + 8;
  int streak = 0;
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < k && streak < streak_limit;
       ++attempt) {
    for (int r = 0; r < c.rows(); ++r) {
      for (int col = 0; col < c.cols(); ++col) {
        noisy.at(r, col) = c.allowed(r, col) ? static_cast<double>(c.at(r, col)) + eps * rng.unit() : kForbidden;
      }
    }
    const auto cand = solve_linear_assignment(noisy);
    std::int64_t exact = 0;
    for (int r = 0; r < c.rows(); ++r) exact += c.at(r, cand.col_for_row[r]);
    if (exact == optimum && seen.insert(cand.col_for_row).second) {
      out.push_back({cand.col_for_row, exact});
      streak = 0;
    } else {
      ++streak;
    }
  }
  return out;
}

}  // namespace mlsabre
