#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "discrepancy/phased_solver.hpp"
#include "discrepancy/rng.hpp"
#include "discrepancy/set_system.hpp"

namespace discrepancy {

/// Tail colored integrally, head colored fractionally so that the two
/// cancel: A_head * head_fractional = -b.
struct ReductionResult {
  Coloring tail_coloring;    // elements k..n-1
  DiscrepancyVector b;       // A_tail * tail_coloring
  Coloring head_fractional;  // elements 0..k-1
  std::size_t k = 0;
};

/// The head LP {A_head x = -b, x in [-1, 1]^k} has no solution.
struct HeadInfeasible {
  DiscrepancyVector b;
  Eigen::VectorXd certificate;  // Farkas multipliers from the LP
  Coloring tail_coloring;
};

using ReductionOutcome = std::variant<ReductionResult, HeadInfeasible>;

/// Beck-Fiala on elements k..n-1, then the head LP on elements 0..k-1.
/// Requires 0 < k <= n.
ReductionOutcome reduce(const SetSystem& sys, std::size_t k, double tol = 1e-8);

/// ceil(C * m * ln(max(m, 3))^2).
std::size_t default_head_size(std::size_t m, double C = 4.0);

/**
 * Full pipeline. For n <= k this is solve(sys, cfg). Otherwise the phased
 * solver runs on the head starting from the fractional head coloring, and
 * its integral output is joined with the tail coloring. A head LP failure,
 * a head solve that fell back, or a combined discrepancy above 2t - 1 all
 * send the whole system through Beck-Fiala instead. The reported
 * discrepancy is recomputed on the combined coloring.
 */
SolveReport solve_full(const SetSystem& sys, const PhaseConfig& cfg, std::size_t k);

inline constexpr std::size_t kMaxContainmentRows = 16;

struct ContainmentVerdict {
  bool contained = false;
  /// First vertex of 2t [-1, 1]^m (in enumeration order) outside the
  /// polytope, with the LP's Farkas direction scaled to unit l1 norm.
  std::optional<Eigen::VectorXd> witness_vertex;
  std::optional<Eigen::VectorXd> dual_direction;
  /// ||y^T A||_1 for dual_direction; at most 2t by construction.
  double dual_norm = 0.0;
};

/// Checks 2t B_inf^m inside {A x : x in [-1, 1]^k} one vertex at a time.
/// Throws CapacityError for more than kMaxContainmentRows rows.
ContainmentVerdict containment_check_detailed(const Eigen::MatrixXd& head, std::size_t t,
                                              double tol = 1e-8);
bool containment_check_exact(const Eigen::MatrixXd& head, std::size_t t, double tol = 1e-8);

struct DualSample {
  double min_norm = 0.0;  // min ||y^T A||_1 over the sampled y
  Eigen::VectorXd argmin;
  /// min_norm < 2t: containment provably fails. A row with exactly 2t ones
  /// only reaches the boundary and certifies nothing. Anything else is
  /// evidence only, since the condition ranges over the whole l1 sphere.
  bool certifies_failure = false;
};

/**
 * Samples y uniformly from the unit l1 sphere (normalized exponential
 * magnitudes, random signs), always adds +-e_j and the `extra` directions
 * (normalized to unit l1 norm), and returns the smallest ||y^T A||_1.
 */
DualSample dual_condition_sample(const Eigen::MatrixXd& head, std::size_t t, std::size_t trials,
                                 Seed seed, const std::vector<Eigen::VectorXd>& extra = {});

}  // namespace discrepancy
