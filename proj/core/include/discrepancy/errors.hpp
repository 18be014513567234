#pragma once

#include <stdexcept>
#include <string>

namespace discrepancy {

/// Bad sizes, out-of-range parameters, malformed input.
class InvalidParameter : public std::invalid_argument {
 public:
  explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

/// A documented precondition of an operation does not hold for its input.
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

/// The request is too large for an exhaustive method.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown inside a solver: ill-conditioned basis, iteration cap,
/// residual that cannot be certified. Distinct from a clean infeasible verdict.
class SolverBreakdown : public std::runtime_error {
 public:
  explicit SolverBreakdown(const std::string& what) : std::runtime_error(what) {}
};

/// A partial-coloring request whose budgets violate the potential condition.
/// The phased solver treats this as its abort signal.
class RejectedRequest : public std::runtime_error {
 public:
  RejectedRequest(const std::string& what, double potential, double limit)
      : std::runtime_error(what), potential_(potential), limit_(limit) {}

  double potential() const noexcept { return potential_; }
  double limit() const noexcept { return limit_; }

 private:
  double potential_;
  double limit_;
};

}  // namespace discrepancy
