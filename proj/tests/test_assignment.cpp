#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "mlsabre/assignment.hpp"
#include "support/oracles.hpp"

namespace mlsabre {
namespace {

using testing::brute_force_assignment;

CostMatrix<std::int64_t> random_matrix(int rows, int cols, int max_entry, Rng& rng) {
  CostMatrix<std::int64_t> c(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int col = 0; col < cols; ++col) c.at(r, col) = static_cast<std::int64_t>(rng.below(max_entry + 1));
  }
  return c;
}

bool injective(const std::vector<int>& cols, int num_cols) {
  std::vector<int> seen(num_cols, 0);
  for (int c : cols) {
    if (c < 0 || c >= num_cols || seen[c]++) return false;
  }
  return true;
}

std::int64_t cost_of(const CostMatrix<std::int64_t>& c, const std::vector<int>& cols) {
  std::int64_t s = 0;
  for (int r = 0; r < c.rows(); ++r) s += c.at(r, cols[r]);
  return s;
}

TEST(Assignment, ZeroDiagonalGivesIdentity) {
  CostMatrix<std::int64_t> c(4, 4, 5);
  for (int i = 0; i < 4; ++i) c.at(i, i) = 0;
  const auto a = solve_linear_assignment(c);
  EXPECT_EQ(a.col_for_row, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(a.cost, 0);
}

TEST(Assignment, SymmetricTwoByTwo) {
  const CostMatrix<std::int64_t> c({{1, 2}, {2, 1}});
  const auto a = solve_linear_assignment(c);
  EXPECT_EQ(a.col_for_row, (std::vector<int>{0, 1}));
  EXPECT_EQ(a.cost, 2);
}

TEST(Assignment, RectangularPicksCheapColumns) {
  const CostMatrix<std::int64_t> c({{9, 9, 1, 9}, {9, 2, 9, 9}});
  const auto a = solve_linear_assignment(c);
  EXPECT_EQ(a.col_for_row, (std::vector<int>{2, 1}));
  EXPECT_EQ(a.cost, 3);
}

TEST(Assignment, ShapeErrors) {
  EXPECT_THROW(CostMatrix<std::int64_t>(3, 2), std::invalid_argument);
  EXPECT_THROW(CostMatrix<std::int64_t>({{1, 2}, {3}}), std::invalid_argument);
}

TEST(Assignment, EmptyMatrix) {
  const auto a = solve_linear_assignment(CostMatrix<std::int64_t>(0, 3));
  EXPECT_TRUE(a.col_for_row.empty());
  EXPECT_EQ(a.cost, 0);
}

TEST(Assignment, ForbiddenEntriesAreAvoided) {
  CostMatrix<std::int64_t> c({{-1, 5}, {1, -1}});
  c.set_forbidden(-1);
  const auto a = solve_linear_assignment(c);
  EXPECT_EQ(a.col_for_row, (std::vector<int>{1, 0}));
  EXPECT_EQ(a.cost, 6);
}

TEST(Assignment, InfeasibleNamesRow) {
  CostMatrix<std::int64_t> c({{0, 1}, {-1, -1}});
  c.set_forbidden(-1);
  try {
    solve_linear_assignment(c);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
  }
}

TEST(Assignment, SixByEightMatchesBruteForce) {
  Rng rng(68);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_matrix(6, 8, 20, rng);
    const auto a = solve_linear_assignment(c);
    ASSERT_TRUE(injective(a.col_for_row, 8));
    ASSERT_EQ(a.cost, cost_of(c, a.col_for_row));
    ASSERT_EQ(a.cost, brute_force_assignment(c));
  }
}

TEST(Assignment, SmallRandomShapesMatchBruteForce) {
  Rng rng(79);
  for (int trial = 0; trial < 500; ++trial) {
    const int rows = 1 + static_cast<int>(rng.below(6));
    const int cols = rows + static_cast<int>(rng.below(3));
    const auto c = random_matrix(rows, cols, 9, rng);
    ASSERT_EQ(solve_linear_assignment(c).cost, brute_force_assignment(c));
  }
}

TEST(Assignment, WithForbiddenMatchesBruteForce) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto c = random_matrix(4, 6, 9, rng);
    for (int r = 0; r < 4; ++r) {
      for (int col = 0; col < 6; ++col) {
        if (rng.below(4) == 0) c.at(r, col) = 100;
      }
    }
    c.set_forbidden(100);
    const auto best = brute_force_assignment(c);
    if (best == std::numeric_limits<std::int64_t>::max()) {
      EXPECT_THROW(solve_linear_assignment(c), InfeasibleError);
    } else {
      const auto a = solve_linear_assignment(c);
      for (int r = 0; r < 4; ++r) EXPECT_TRUE(c.allowed(r, a.col_for_row[r]));
      EXPECT_EQ(a.cost, best);
    }
  }
}

TEST(Assignment, FloatingCosts) {
  CostMatrix<double> c(3, 3);
  const double v[3][3] = {{0.5, 0.25, 0.75}, {0.1, 0.9, 0.3}, {0.6, 0.2, 0.4}};
  for (int r = 0; r < 3; ++r) {
    for (int col = 0; col < 3; ++col) c.at(r, col) = v[r][col];
  }
  EXPECT_NEAR(solve_linear_assignment(c).cost, brute_force_assignment(c), 1e-12);
}

TEST(KDiverse, UniqueOptimumGivesOne) {
  const CostMatrix<std::int64_t> c({{0, 5, 5}, {5, 0, 5}, {5, 5, 0}});
  const auto out = k_diverse_optimal_assignments(c, 10, 1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].col_for_row, (std::vector<int>{0, 1, 2}));
}

TEST(KDiverse, ZeroTwoByTwoGivesBothPermutations) {
  const CostMatrix<std::int64_t> c(2, 2, 0);
  const auto out = k_diverse_optimal_assignments(c, 2, 7);
  ASSERT_EQ(out.size(), 2u);
  std::set<std::vector<int>> seen;
  for (const auto& a : out) {
    EXPECT_EQ(a.cost, 0);
    seen.insert(a.col_for_row);
  }
  EXPECT_EQ(seen, (std::set<std::vector<int>>{{0, 1}, {1, 0}}));
}

TEST(KDiverse, ZeroThreeByThreeAtMostSix) {
  const CostMatrix<std::int64_t> c(3, 3, 0);
  const auto out = k_diverse_optimal_assignments(c, 10, 3);
  EXPECT_LE(out.size(), 6u);
  EXPECT_GE(out.size(), 2u);
  std::set<std::vector<int>> seen;
  for (const auto& a : out) {
    EXPECT_TRUE(injective(a.col_for_row, 3));
    EXPECT_EQ(a.cost, 0);
    seen.insert(a.col_for_row);
  }
  EXPECT_EQ(seen.size(), out.size());
}

TEST(KDiverse, RandomPropertiesAndDeterminism) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_matrix(4, 6, 3, rng);
    const auto out = k_diverse_optimal_assignments(c, 8, trial);
    ASSERT_FALSE(out.empty());
    const std::int64_t best = brute_force_assignment(c);
    EXPECT_EQ(out[0].cost, best);
    std::set<std::vector<int>> seen;
    for (const auto& a : out) {
      EXPECT_TRUE(injective(a.col_for_row, 6));
      EXPECT_EQ(cost_of(c, a.col_for_row), best);
      seen.insert(a.col_for_row);
    }
    EXPECT_EQ(seen.size(), out.size());
    const auto again = k_diverse_optimal_assignments(c, 8, trial);
    ASSERT_EQ(again.size(), out.size());
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(again[i].col_for_row, out[i].col_for_row);
  }
  EXPECT_THROW(k_diverse_optimal_assignments(CostMatrix<std::int64_t>(1, 1), 0, 0), std::invalid_argument);
}

}  // namespace
}  // namespace mlsabre
