#include "discrepancy/beck_fiala.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "discrepancy/errors.hpp"
#include "discrepancy/lp_core.hpp"

namespace discrepancy {

Coloring greedy_sign(const SetSystem& sys, std::vector<double> x, const Coloring& x0) {
  if (x.size() != sys.num_elements() || x0.size() != sys.num_elements()) {
    throw InvalidParameter("greedy_sign: length mismatch");
  }
  std::vector<double> dev(sys.num_sets(), 0.0);
  for (Index i = 0; i < x.size(); ++i) {
    for (Index j : sys.sets_of(i)) dev[j] += x[i] - x0[i];
  }
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] == 1.0 || x[i] == -1.0) continue;
    double cost_plus = 0.0, cost_minus = 0.0;
    for (Index j : sys.sets_of(i)) {
      cost_plus = std::max(cost_plus, std::abs(dev[j] + 1.0 - x[i]));
      cost_minus = std::max(cost_minus, std::abs(dev[j] - 1.0 - x[i]));
    }
    double sign;
    if (cost_plus != cost_minus) {
      sign = cost_plus < cost_minus ? 1.0 : -1.0;
    } else {
      sign = x[i] >= 0.0 ? 1.0 : -1.0;
    }
    for (Index j : sys.sets_of(i)) dev[j] += sign - x[i];
    x[i] = sign;
  }
  return Coloring(std::move(x));
}

Coloring beck_fiala_color(const SetSystem& sys, const Coloring& x0, const BeckFialaOptions& opts) {
  const std::size_t n = sys.num_elements();
  const std::size_t m = sys.num_sets();
  const std::size_t t = sys.degree();
  if (x0.size() != n) {
    throw InvalidParameter("beck_fiala_color: start has length " + std::to_string(x0.size()) +
                           ", expected " + std::to_string(n));
  }

  Eigen::VectorXd x = x0.to_vector();
  std::vector<bool> floating(n, false);
  std::vector<std::size_t> float_count(m, 0);
  for (Index i = 0; i < n; ++i) {
    if (x(static_cast<Eigen::Index>(i)) >= 1.0 - opts.tol) x(static_cast<Eigen::Index>(i)) = 1.0;
    if (x(static_cast<Eigen::Index>(i)) <= -1.0 + opts.tol) x(static_cast<Eigen::Index>(i)) = -1.0;
    if (std::abs(x(static_cast<Eigen::Index>(i))) < 1.0) {
      floating[i] = true;
      for (Index j : sys.sets_of(i)) ++float_count[j];
    }
  }

  const Eigen::VectorXd lower = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), -1.0);
  const Eigen::VectorXd upper = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0);
  std::vector<long> block_row(m, -1);
  std::vector<Eigen::Index> working;
  Index cursor = 0;

  auto touches_active = [&](Index i) {
    for (Index j : sys.sets_of(i)) {
      if (float_count[j] > t) return true;
    }
    return false;
  };

  for (;;) {
    std::vector<Index> active;
    for (Index j = 0; j < m; ++j) {
      if (float_count[j] > t) active.push_back(j);
    }
    if (active.empty()) break;
    std::fill(block_row.begin(), block_row.end(), -1);
    for (std::size_t r = 0; r < active.size(); ++r) block_row[active[r]] = static_cast<long>(r);

    // Keep floats that still touch an active row; active rows only ever
    // disappear, so the cursor never has to revisit skipped elements.
    std::erase_if(working, [&](Eigen::Index i) {
      return !floating[static_cast<std::size_t>(i)] || !touches_active(static_cast<Index>(i));
    });
    const std::size_t want = 2 * active.size() + 1;
    while (working.size() < want && cursor < n) {
      if (floating[cursor] && touches_active(cursor)) {
        working.push_back(static_cast<Eigen::Index>(cursor));
      }
      ++cursor;
    }
    if (working.size() <= active.size()) {
      throw SolverBreakdown("beck_fiala_color: fewer floating columns than active rows");
    }

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(active.size()),
                                                  static_cast<Eigen::Index>(working.size()));
    for (std::size_t s = 0; s < working.size(); ++s) {
      for (Index j : sys.sets_of(static_cast<Index>(working[s]))) {
        if (block_row[j] >= 0) block(block_row[j], static_cast<Eigen::Index>(s)) = 1.0;
      }
    }
    const NullWalkResult walk = null_space_walk(block, working, x, lower, upper, 1e-9);
    if (walk.pinned == 0) throw SolverBreakdown("beck_fiala_color: no progress");

    for (Eigen::Index i : working) {
      const auto e = static_cast<Index>(i);
      if (floating[e] && std::abs(x(i)) >= 1.0 - opts.tol) {
        x(i) = x(i) > 0 ? 1.0 : -1.0;
        floating[e] = false;
        for (Index j : sys.sets_of(e)) --float_count[j];
      }
    }
  }

  return greedy_sign(sys, std::vector<double>(x.data(), x.data() + x.size()), x0);
}

}  // namespace discrepancy
