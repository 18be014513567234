#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "discrepancy/set_system.hpp"

namespace discrepancy::oracles {

inline constexpr std::size_t kMaxHullColumns = 16;
inline constexpr std::size_t kMaxHullRows = 6;
inline constexpr std::size_t kMaxExhaustiveElements = 22;

// Naive reference implementations for tests. Nothing here calls into the
// solver code paths except the one LP verdict that membership cross-checks.

/// Is target in {A x : x in [-1, 1]^k}? Decided twice: by the membership LP
/// and by the zonotope's facet inequalities |y.target| <= sum_i |y.a_i|, with
/// candidate normals y orthogonal to every independent (m-1)-subset of the
/// columns and unit vectors. Throws SolverBreakdown if the two disagree.
bool enumerate_polytope_membership(const Eigen::MatrixXd& a, const Eigen::VectorXd& target);

/// Only the facet-inequality half of enumerate_polytope_membership.
bool zonotope_contains(const Eigen::MatrixXd& a, const Eigen::VectorXd& target,
                       double rel_tol = 1e-9);

/// min over chi in {-1,+1}^n of max_j |(A chi)_j| by plain enumeration of
/// every sign vector and a fresh row-sum loop for each.
double exhaustive_min_discrepancy(const SetSystem& sys);

}  // namespace discrepancy::oracles
