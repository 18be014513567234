#include "discrepancy/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "discrepancy/errors.hpp"

namespace discrepancy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs_entry(const Eigen::MatrixXd& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

// Reduces `m` in place to reduced row echelon form; returns the pivot column
// of each pivot row.
std::vector<Eigen::Index> row_reduce(Eigen::MatrixXd& m, double abs_tol) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < m.cols() && r < m.rows(); ++c) {
    Eigen::Index p = r;
    m.col(c).segment(r, m.rows() - r).cwiseAbs().maxCoeff(&p);
    p += r;
    if (std::abs(m(p, c)) <= abs_tol) continue;
    if (p != r) m.row(p).swap(m.row(r));
    m.row(r) /= m(r, c);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != r && m(i, c) != 0.0) m.row(i) -= m(i, c) * m.row(r);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

enum class Status : unsigned char { basic, at_lower, at_upper };

constexpr std::size_t kBlandAfter = 50;  // consecutive degenerate pivots

// Phase-one bounded simplex over [A' | I] where A' = diag(sign) A and the
// artificial block starts as the basis.
class PhaseOneSimplex {
 public:
  PhaseOneSimplex(const BoxedLinearSystem& sys, const LpOptions& opts)
      : sys_(sys), opts_(opts), m_(sys.rows()), k_(sys.cols()), total_(k_ + m_) {
    scale_ = std::max(1.0, max_abs_entry(sys.matrix));
    lower_.resize(total_);
    upper_.resize(total_);
    lower_.head(k_) = sys.lower;
    upper_.head(k_) = sys.upper;
    lower_.tail(m_).setZero();
    upper_.tail(m_).setConstant(kInf);

    status_.assign(static_cast<std::size_t>(total_), Status::at_lower);
    Eigen::VectorXd residual = sys.target - sys.matrix * sys.lower;
    sign_ = residual.unaryExpr([](double r) { return r >= 0.0 ? 1.0 : -1.0; });

    tableau_.resize(m_, total_);
    tableau_.leftCols(k_) = sign_.asDiagonal() * sys.matrix;
    tableau_.rightCols(m_).setIdentity();
    beta_ = residual.cwiseAbs();
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index r = 0; r < m_; ++r) {
      basis_[static_cast<std::size_t>(r)] = k_ + r;
      status_[static_cast<std::size_t>(k_ + r)] = Status::basic;
    }
    // Every basic variable is artificial with unit cost.
    reduced_ = Eigen::RowVectorXd::Zero(total_);
    reduced_.head(k_) = -tableau_.leftCols(k_).colwise().sum();
  }

  void run() {
    const std::size_t cap = opts_.max_iterations != 0
                                ? opts_.max_iterations
                                : 50 * static_cast<std::size_t>(total_) + 1000;
    const double opt_tol = 1e-9 * scale_;
    const double piv_tol = opts_.pivot_tol * scale_;
    std::size_t degenerate_streak = 0;
    for (std::size_t iter = 0;; ++iter) {
      if (iter >= cap) {
        throw SolverBreakdown("phase-one simplex exceeded " + std::to_string(cap) + " iterations");
      }
      const Eigen::Index q = choose_entering(opt_tol, degenerate_streak >= kBlandAfter);
      if (q < 0) return;
      const double dir = status(q) == Status::at_lower ? 1.0 : -1.0;

      double theta = upper_(q) - lower_(q);
      Eigen::Index leave_row = -1;
      for (Eigen::Index r = 0; r < m_; ++r) {
        const double a = dir * tableau_(r, q);
        const Eigen::Index var = basis_[static_cast<std::size_t>(r)];
        double limit;
        if (a > piv_tol) {
          limit = (beta_(r) - lower_(var)) / a;
        } else if (a < -piv_tol && std::isfinite(upper_(var))) {
          limit = (upper_(var) - beta_(r)) / -a;
        } else {
          continue;
        }
        limit = std::max(limit, 0.0);
        // Bland: smallest limit, ties to the lowest variable index; a tie
        // with the entering variable's own bound flip keeps the flip.
        if (limit < theta - 1e-12) {
          theta = limit;
          leave_row = r;
        } else if (limit <= theta + 1e-12 && leave_row >= 0 &&
                   var < basis_[static_cast<std::size_t>(leave_row)]) {
          theta = std::min(theta, limit);
          leave_row = r;
        }
      }
      if (!std::isfinite(theta)) {
        throw SolverBreakdown("phase-one simplex found an unbounded ray");
      }

      degenerate_streak = theta > 0.0 ? 0 : degenerate_streak + 1;
      beta_ -= (dir * theta) * tableau_.col(q);
      if (leave_row < 0) {
        status(q) = dir > 0 ? Status::at_upper : Status::at_lower;
        continue;
      }
      const double entering_value = dir > 0 ? lower_(q) + theta : upper_(q) - theta;
      const Eigen::Index leaving = basis_[static_cast<std::size_t>(leave_row)];
      const bool decreased = dir * tableau_(leave_row, q) > 0;
      status(leaving) = decreased ? Status::at_lower : Status::at_upper;
      if (leaving >= k_) upper_(leaving) = 0.0;  // artificials never re-enter
      pivot(leave_row, q);
      beta_(leave_row) = entering_value;
      basis_[static_cast<std::size_t>(leave_row)] = q;
      status(q) = Status::basic;
    }
  }

  // Structural point with basic values recomputed from B^{-1}.
  Eigen::VectorXd structural_point() const {
    Eigen::VectorXd full = nonbasic_values();
    Eigen::VectorXd rhs = sign_.cwiseProduct(sys_.target);
    for (Eigen::Index j = 0; j < total_; ++j) {
      if (status(j) == Status::basic || full(j) == 0.0) continue;
      rhs -= full(j) * column(j);
    }
    const Eigen::VectorXd basic = binv() * rhs;
    for (Eigen::Index r = 0; r < m_; ++r) full(basis_[static_cast<std::size_t>(r)]) = basic(r);
    Eigen::VectorXd x = full.head(k_);
    return x.cwiseMax(sys_.lower).cwiseMin(sys_.upper);
  }

  // y = sign o (c_B^T B^{-1}).
  Eigen::VectorXd multipliers() const {
    Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(m_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] >= k_) cost(r) = 1.0;
    }
    Eigen::VectorXd pi = (cost * binv()).transpose();
    return pi.cwiseProduct(sign_);
  }

 private:
  Status& status(Eigen::Index j) { return status_[static_cast<std::size_t>(j)]; }
  Status status(Eigen::Index j) const { return status_[static_cast<std::size_t>(j)]; }

  Eigen::MatrixXd binv() const { return tableau_.rightCols(m_); }

  Eigen::VectorXd column(Eigen::Index j) const {
    if (j < k_) return sign_.cwiseProduct(sys_.matrix.col(j));
    return Eigen::VectorXd::Unit(m_, j - k_);
  }

  Eigen::VectorXd nonbasic_values() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(total_);
    for (Eigen::Index j = 0; j < total_; ++j) {
      if (status(j) == Status::at_lower) v(j) = lower_(j);
      if (status(j) == Status::at_upper) v(j) = upper_(j);
    }
    return v;
  }

  // Dantzig pricing (largest improving reduced cost). After a run of
  // degenerate pivots, Bland's lowest-index rule takes over until the
  // objective moves again, which rules out cycling.
  Eigen::Index choose_entering(double opt_tol, bool bland) const {
    Eigen::Index best = -1;
    double best_gain = opt_tol;
    for (Eigen::Index j = 0; j < total_; ++j) {
      const Status s = status(j);
      if (s == Status::basic || upper_(j) <= lower_(j)) continue;
      double gain = 0.0;
      if (s == Status::at_lower) gain = -reduced_(j);
      if (s == Status::at_upper) gain = reduced_(j);
      if (gain <= opt_tol) continue;
      if (bland) return j;
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    return best;
  }

  void pivot(Eigen::Index p, Eigen::Index q) {
    tableau_.row(p) /= tableau_(p, q);
    const Eigen::RowVectorXd prow = tableau_.row(p);
    Eigen::VectorXd col = tableau_.col(q);
    col(p) = 0.0;
    tableau_.noalias() -= col * prow;
    const double dq = reduced_(q);
    reduced_ -= dq * prow;
  }

  const BoxedLinearSystem& sys_;
  const LpOptions& opts_;
  Eigen::Index m_;
  Eigen::Index k_;
  Eigen::Index total_;
  double scale_ = 1.0;
  Eigen::VectorXd lower_, upper_, sign_, beta_;
  Eigen::MatrixXd tableau_;
  Eigen::RowVectorXd reduced_;
  std::vector<Eigen::Index> basis_;
  std::vector<Status> status_;
};

double certificate_gap(const BoxedLinearSystem& sys, const Eigen::VectorXd& y) {
  const Eigen::RowVectorXd ya = y.transpose() * sys.matrix;
  double support = 0.0;
  for (Eigen::Index j = 0; j < ya.size(); ++j) {
    support += std::max(ya(j) * sys.lower(j), ya(j) * sys.upper(j));
  }
  return y.dot(sys.target) - support;
}

}  // namespace

BoxedLinearSystem BoxedLinearSystem::unit_box(Eigen::MatrixXd matrix, Eigen::VectorXd target) {
  const Eigen::Index k = matrix.cols();
  return {std::move(matrix), std::move(target), Eigen::VectorXd::Constant(k, -1.0),
          Eigen::VectorXd::Constant(k, 1.0)};
}

void BoxedLinearSystem::validate() const {
  if (target.size() != matrix.rows()) {
    throw InvalidParameter("target length " + std::to_string(target.size()) + " does not match " +
                           std::to_string(matrix.rows()) + " rows");
  }
  if (lower.size() != matrix.cols() || upper.size() != matrix.cols()) {
    throw InvalidParameter("bound vectors do not match the column count");
  }
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    if (!std::isfinite(lower(j)) || !std::isfinite(upper(j)) || lower(j) > upper(j)) {
      throw InvalidParameter("invalid bounds on variable " + std::to_string(j));
    }
  }
  if (!matrix.allFinite() || !target.allFinite()) {
    throw InvalidParameter("non-finite entries in linear system");
  }
}

FeasibilityResult solve_feasible(const BoxedLinearSystem& sys, const LpOptions& opts) {
  sys.validate();
  if (!(opts.tol > 0.0)) throw InvalidParameter("tolerance must be positive");

  PhaseOneSimplex simplex(sys, opts);
  simplex.run();

  Eigen::VectorXd x = simplex.structural_point();
  const double residual =
      sys.rows() == 0 ? 0.0 : (sys.matrix * x - sys.target).cwiseAbs().maxCoeff();
  if (residual <= opts.tol) return FeasibilityResult(std::move(x));

  Eigen::VectorXd y = simplex.multipliers();
  const double gap = certificate_gap(sys, y);
  if (!(gap > 0.0)) {
    throw SolverBreakdown("phase-one optimum leaves residual " + std::to_string(residual) +
                          " but yields no separating certificate");
  }
  return FeasibilityResult(Infeasible{std::move(y), gap});
}

std::optional<Eigen::VectorXd> null_vector(Eigen::MatrixXd block, double abs_tol) {
  const Eigen::Index cols = block.cols();
  if (cols == 0) return std::nullopt;
  const auto pivots = row_reduce(block, abs_tol);
  if (static_cast<Eigen::Index>(pivots.size()) == cols) return std::nullopt;

  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (Eigen::Index c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  Eigen::Index free_col = 0;
  while (is_pivot[static_cast<std::size_t>(free_col)]) ++free_col;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
  z(free_col) = 1.0;
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    z(pivots[r]) = -block(static_cast<Eigen::Index>(r), free_col);
  }
  return z / z.cwiseAbs().maxCoeff();
}

std::size_t numerical_rank(const Eigen::MatrixXd& a, double rel_tol) {
  const double norm = max_abs_entry(a);
  if (norm == 0.0) return 0;
  Eigen::MatrixXd work = a;
  return row_reduce(work, rel_tol * norm).size();
}

std::size_t count_fractional(const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper, double tol) {
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) > lower(j) + tol && x(j) < upper(j) - tol) ++count;
  }
  return count;
}

NullWalkResult null_space_walk(const Eigen::MatrixXd& block, std::span<const Eigen::Index> vars,
                               Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                               const Eigen::VectorXd& upper, double abs_tol) {
  const Eigen::Index width = block.cols();
  if (static_cast<std::size_t>(width) != vars.size()) {
    throw InvalidParameter("null_space_walk: one variable per block column required");
  }
  Eigen::MatrixXd reduced = block;
  const auto pivots = row_reduce(reduced, abs_tol);
  std::vector<bool> is_pivot(static_cast<std::size_t>(width), false);
  for (Eigen::Index c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;

  Eigen::Index dim = width - static_cast<Eigen::Index>(pivots.size());
  NullWalkResult result{static_cast<std::size_t>(dim), 0};
  if (dim == 0) return result;

  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(width, dim);
  for (Eigen::Index c = 0, col = 0; c < width; ++c) {
    if (is_pivot[static_cast<std::size_t>(c)]) continue;
    basis(c, col) = 1.0;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      basis(pivots[r], col) = -reduced(static_cast<Eigen::Index>(r), c);
    }
    ++col;
  }

  auto at_bound = [&](Eigen::Index s) {
    const Eigen::Index j = vars[static_cast<std::size_t>(s)];
    return x(j) <= lower(j) || x(j) >= upper(j);
  };
  // Removes coordinate s from the span, dropping one basis vector.
  auto eliminate = [&](Eigen::Index s) {
    Eigen::Index best = -1;
    double mag = 0.0;
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (std::abs(basis(s, c)) > mag) {
        mag = std::abs(basis(s, c));
        best = c;
      }
    }
    if (best >= 0 && mag > 1e-14) {
      const Eigen::VectorXd pivot_col = basis.col(best) / basis(s, best);
      for (Eigen::Index c = 0; c < dim; ++c) {
        if (c != best) basis.col(c) -= basis(s, c) * pivot_col;
      }
      if (best != dim - 1) basis.col(best).swap(basis.col(dim - 1));
      --dim;
    }
    basis.row(s).setZero();
  };

  std::vector<bool> pinned(static_cast<std::size_t>(width), false);
  for (Eigen::Index s = 0; s < width; ++s) {
    if (at_bound(s)) {
      eliminate(s);
      pinned[static_cast<std::size_t>(s)] = true;
    }
  }

  while (dim > 0) {
    const Eigen::VectorXd z = basis.col(0);
    const double scale = z.cwiseAbs().maxCoeff();
    if (scale <= 1e-14) {
      if (dim > 1) basis.col(0).swap(basis.col(dim - 1));
      --dim;
      continue;
    }
    double step = kInf;
    Eigen::Index hit = -1;
    for (Eigen::Index s = 0; s < width; ++s) {
      const double dz = z(s);
      if (std::abs(dz) <= 1e-12 * scale) continue;
      const Eigen::Index j = vars[static_cast<std::size_t>(s)];
      const double limit = dz > 0 ? (upper(j) - x(j)) / dz : (x(j) - lower(j)) / -dz;
      if (limit < step) {
        step = limit;
        hit = s;
      }
    }
    if (hit < 0) {
      if (dim > 1) basis.col(0).swap(basis.col(dim - 1));
      --dim;
      continue;
    }
    for (Eigen::Index s = 0; s < width; ++s) {
      const Eigen::Index j = vars[static_cast<std::size_t>(s)];
      double v = std::clamp(x(j) + step * z(s), lower(j), upper(j));
      const double eps = 1e-13 * std::max({1.0, std::abs(lower(j)), std::abs(upper(j))});
      if (v <= lower(j) + eps) v = lower(j);
      if (v >= upper(j) - eps) v = upper(j);
      x(j) = v;
    }
    const Eigen::Index j_hit = vars[static_cast<std::size_t>(hit)];
    x(j_hit) = z(hit) > 0 ? upper(j_hit) : lower(j_hit);
    for (Eigen::Index s = 0; s < width; ++s) {
      if (!pinned[static_cast<std::size_t>(s)] && at_bound(s)) {
        eliminate(s);
        pinned[static_cast<std::size_t>(s)] = true;
        ++result.pinned;
      }
    }
  }
  return result;
}

Eigen::VectorXd basic_feasible_solution(const BoxedLinearSystem& sys, const Eigen::VectorXd& start,
                                        const LpOptions& opts) {
  sys.validate();
  if (start.size() != sys.cols()) throw InvalidParameter("start has the wrong length");
  const double tol = opts.tol;
  for (Eigen::Index j = 0; j < start.size(); ++j) {
    if (start(j) < sys.lower(j) - tol || start(j) > sys.upper(j) + tol) {
      throw PreconditionError("start violates the bounds of variable " + std::to_string(j));
    }
  }
  if (sys.rows() > 0 && (sys.matrix * start - sys.target).cwiseAbs().maxCoeff() > tol) {
    throw PreconditionError("start does not satisfy A x = b within tolerance");
  }

  const Eigen::Index m = sys.rows();
  const double abs_rank_tol = opts.rank_tol * std::max(max_abs_entry(sys.matrix), 1e-300);
  Eigen::VectorXd x = start.cwiseMax(sys.lower).cwiseMin(sys.upper);

  std::vector<Eigen::Index> free;
  for (;;) {
    free.clear();
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (x(j) > sys.lower(j) && x(j) < sys.upper(j)) free.push_back(j);
    }
    if (free.empty()) break;
    // Any 2m + 1 columns leave a null space of dimension > m; the whole free
    // set is examined once few enough remain.
    const std::size_t cap = 2 * static_cast<std::size_t>(m) + 1;
    const bool whole = free.size() <= cap;
    if (!whole) free.resize(cap);
    Eigen::MatrixXd block(m, static_cast<Eigen::Index>(free.size()));
    for (std::size_t s = 0; s < free.size(); ++s) {
      block.col(static_cast<Eigen::Index>(s)) = sys.matrix.col(free[s]);
    }
    const NullWalkResult walk = null_space_walk(block, free, x, sys.lower, sys.upper, abs_rank_tol);
    if (walk.null_dim == 0) {
      if (whole) break;
      throw SolverBreakdown("no null direction among 2m + 1 columns");
    }
    if (walk.pinned == 0) throw SolverBreakdown("null-space walk made no progress");
  }
  return x;
}

}  // namespace discrepancy
