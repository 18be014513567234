#include "discrepancy/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "discrepancy/errors.hpp"
#include "discrepancy/lp_core.hpp"

namespace discrepancy::oracles {

namespace {

using Mat = std::vector<std::vector<double>>;

double det(Mat a) {
  // Cofactor expansion along the first row; sizes here stay below 6.
  const std::size_t d = a.size();
  if (d == 0) return 1.0;
  if (d == 1) return a[0][0];
  double total = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    if (a[0][c] == 0.0) continue;
    Mat minor;
    for (std::size_t r = 1; r < d; ++r) {
      std::vector<double> row;
      for (std::size_t cc = 0; cc < d; ++cc) {
        if (cc != c) row.push_back(a[r][cc]);
      }
      minor.push_back(std::move(row));
    }
    const double sign = c % 2 == 0 ? 1.0 : -1.0;
    total += sign * a[0][c] * det(std::move(minor));
  }
  return total;
}

// Generalized cross product of m-1 vectors in R^m: y_i = (-1)^i det(M without row i).
std::vector<double> normal_of(const std::vector<std::vector<double>>& vecs, std::size_t m) {
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    Mat sub;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == i) continue;
      std::vector<double> row;
      for (const auto& v : vecs) row.push_back(v[r]);
      sub.push_back(std::move(row));
    }
    y[i] = (i % 2 == 0 ? 1.0 : -1.0) * det(std::move(sub));
  }
  return y;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t pool) {
  const std::size_t r = idx.size();
  for (std::size_t i = r; i-- > 0;) {
    if (idx[i] < pool - r + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

bool zonotope_contains(const Eigen::MatrixXd& a, const Eigen::VectorXd& target, double rel_tol) {
  const auto m = static_cast<std::size_t>(a.rows());
  const auto k = static_cast<std::size_t>(a.cols());
  if (target.size() != a.rows()) throw InvalidParameter("target length differs from row count");
  if (k > kMaxHullColumns || m > kMaxHullRows) {
    throw CapacityError("hull check limited to " + std::to_string(kMaxHullRows) + " rows and " +
                        std::to_string(kMaxHullColumns) + " columns");
  }
  if (m == 0) return true;

  std::vector<std::vector<double>> pool;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> v(m);
    for (std::size_t r = 0; r < m; ++r)
      v[r] = a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    pool.push_back(std::move(v));
  }
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<double> e(m, 0.0);
    e[r] = 1.0;
    pool.push_back(std::move(e));
  }

  double scale = 1.0;
  for (std::size_t r = 0; r < m; ++r)
    scale = std::max(scale, std::abs(target(static_cast<Eigen::Index>(r))));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t r = 0; r < m; ++r) scale += std::abs(pool[c][r]);
  }

  std::vector<std::size_t> idx(m - 1);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  do {
    std::vector<std::vector<double>> chosen;
    for (std::size_t i : idx) chosen.push_back(pool[i]);
    const std::vector<double> y = normal_of(chosen, m);
    double ylen = 0.0;
    for (double v : y) ylen += std::abs(v);
    if (ylen == 0.0) continue;  // dependent subset

    double lhs = 0.0;
    for (std::size_t r = 0; r < m; ++r) lhs += y[r] * target(static_cast<Eigen::Index>(r));
    double rhs = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double dot = 0.0;
      for (std::size_t r = 0; r < m; ++r) dot += y[r] * pool[c][r];
      rhs += std::abs(dot);
    }
    if (std::abs(lhs) > rhs + rel_tol * ylen * scale) return false;
  } while (next_combination(idx, pool.size()));
  return true;
}

bool enumerate_polytope_membership(const Eigen::MatrixXd& a, const Eigen::VectorXd& target) {
  const bool hull = zonotope_contains(a, target);
  const FeasibilityResult lp = solve_feasible(BoxedLinearSystem::unit_box(a, target));
  if (lp.feasible() != hull) {
    throw SolverBreakdown(std::string("membership LP says ") +
                          (lp.feasible() ? "inside" : "outside") + ", facet check says " +
                          (hull ? "inside" : "outside"));
  }
  return hull;
}

double exhaustive_min_discrepancy(const SetSystem& sys) {
  const std::size_t n = sys.num_elements();
  const std::size_t m = sys.num_sets();
  if (n > kMaxExhaustiveElements) {
    throw CapacityError("exhaustive enumeration limited to " +
                        std::to_string(kMaxExhaustiveElements) + " elements");
  }
  std::vector<std::vector<int>> member(m, std::vector<int>(n, 0));
  for (Index i = 0; i < n; ++i) {
    for (Index j : sys.sets_of(i)) member[j][i] = 1;
  }
  long best = -1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    long worst = 0;
    for (std::size_t j = 0; j < m; ++j) {
      long sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (member[j][i]) sum += (mask >> i) & 1U ? 1 : -1;
      }
      worst = std::max(worst, sum < 0 ? -sum : sum);
    }
    if (best < 0 || worst < best) best = worst;
  }
  return static_cast<double>(std::max(best, 0L));
}

}  // namespace discrepancy::oracles
