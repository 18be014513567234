#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>

#include <Eigen/Dense>

namespace discrepancy {

/// A x = b with lower <= x <= upper. Bounds must be finite.
struct BoxedLinearSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd target;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  /// Bounds fixed at [-1, 1].
  static BoxedLinearSystem unit_box(Eigen::MatrixXd matrix, Eigen::VectorXd target);

  Eigen::Index rows() const noexcept { return matrix.rows(); }
  Eigen::Index cols() const noexcept { return matrix.cols(); }

  /// Throws InvalidParameter on inconsistent shapes, infinite or crossed bounds.
  void validate() const;
};

struct LpOptions {
  /// Feasibility tolerance on ||A x - b||_inf and on the bounds.
  double tol = 1e-8;
  /// Entries below pivot_tol * ||A||_max are treated as zero in pivoting.
  double pivot_tol = 1e-11;
  /// Rank decisions use rank_tol * ||A||_max.
  double rank_tol = 1e-9;
  /// 0 picks a limit proportional to the problem size.
  std::size_t max_iterations = 0;
};

/// Farkas certificate: y with y.b > max over the box of y.(A x).
struct Infeasible {
  Eigen::VectorXd certificate;
  /// y.b - sum_j max(y.a_j * lower_j, y.a_j * upper_j); positive.
  double gap = 0.0;
};

class FeasibilityResult {
 public:
  explicit FeasibilityResult(Eigen::VectorXd point) : value_(std::move(point)) {}
  explicit FeasibilityResult(Infeasible verdict) : value_(std::move(verdict)) {}

  bool feasible() const noexcept { return std::holds_alternative<Eigen::VectorXd>(value_); }
  const Eigen::VectorXd& point() const { return std::get<Eigen::VectorXd>(value_); }
  const Infeasible& infeasible() const { return std::get<Infeasible>(value_); }

 private:
  std::variant<Eigen::VectorXd, Infeasible> value_;
};

/**
 * Decides feasibility of a boxed linear system with a phase-one bounded
 * simplex (artificial variables minimized). Entering variables are priced
 * by largest reduced cost, switching to Bland's rule during degenerate
 * stretches; ratio-test ties go to the lowest variable index.
 *
 * Returns the point on success, or an Infeasible verdict carrying the
 * optimal phase-one multipliers as a Farkas certificate. Throws
 * SolverBreakdown when the iteration cap is hit or the verdict cannot be
 * certified numerically.
 */
FeasibilityResult solve_feasible(const BoxedLinearSystem& sys, const LpOptions& opts = {});

/**
 * Moves a feasible `start` to a basic feasible solution with the same A x.
 *
 * Repeatedly finds z != 0 with A_free z = 0 over the variables strictly
 * inside their bounds and walks along z until one more variable reaches a
 * bound. The result has at most rank(A) variables strictly inside the box.
 * Throws PreconditionError if `start` is not feasible within opts.tol.
 */
Eigen::VectorXd basic_feasible_solution(const BoxedLinearSystem& sys, const Eigen::VectorXd& start,
                                        const LpOptions& opts = {});

/// Gaussian elimination with partial pivoting. Returns a null vector
/// (max-abs entry 1) when the columns of `block` are dependent, i.e. the
/// numerical rank at threshold `abs_tol` is below the column count.
std::optional<Eigen::VectorXd> null_vector(Eigen::MatrixXd block, double abs_tol);

struct NullWalkResult {
  std::size_t null_dim = 0;
  std::size_t pinned = 0;
};

/**
 * Moves x along the null space of `block` until that null space is used up.
 *
 * Column s of `block` belongs to variable vars[s]. A null basis is taken
 * from the reduced row echelon form; each move follows the first basis
 * vector until some variable reaches lower/upper, pins it there, and
 * eliminates its coordinate from the remaining basis. block * x[vars] is
 * unchanged up to round-off. Returns the initial null dimension and the
 * number of variables pinned.
 */
NullWalkResult null_space_walk(const Eigen::MatrixXd& block, std::span<const Eigen::Index> vars,
                               Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                               const Eigen::VectorXd& upper, double abs_tol);

/// Numerical rank at threshold `rel_tol * ||A||_max`.
std::size_t numerical_rank(const Eigen::MatrixXd& a, double rel_tol = 1e-9);

/// Variables strictly inside (lower + tol, upper - tol).
std::size_t count_fractional(const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper, double tol);

}  // namespace discrepancy
