#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "discrepancy/rng.hpp"

namespace discrepancy {

/// Constraint rows v_j with budgets c_j: the walk keeps
/// |<x - start, v_j>| <= c_j ||v_j||_2. A budget of +infinity leaves the row
/// unconstrained.
struct PartialColoringRequest {
  Eigen::MatrixXd rows;  // one constraint per row, n columns
  std::vector<double> budgets;
  Eigen::VectorXd start;
  double delta = 0.0;  // freeze threshold; <= 0 selects 1/n
  Seed seed = 0;
  std::size_t max_restarts = 10;
  std::optional<double> step_size;        // gamma override
  std::optional<std::size_t> step_count;  // T override
};

struct PartialColoringResult {
  Eigen::VectorXd point;
  std::vector<bool> frozen_mask;  // |x_i| >= 1 - delta
  std::size_t restarts_used = 0;

  std::size_t frozen_count() const;
};

/// Every restart failed to freeze half of the variables.
struct Exhausted {
  std::size_t attempts = 0;
};

using PartialColoringOutcome = std::variant<PartialColoringResult, Exhausted>;

struct WalkParameters {
  double delta = 0.0;
  double step_size = 0.0;
  std::size_t step_count = 0;
};

/// sum_j exp(-c_j^2 / 16) over finite budgets.
double potential(const std::vector<double>& budgets);

/// potential(budgets) <= n / 16.
bool potential_condition_holds(const std::vector<double>& budgets, std::size_t n);

/// delta (1/n by default), gamma = delta / sqrt(8 ln(max(n * m_finite, 2) / delta)),
/// T = ceil(16 / gamma^2), with request overrides applied.
WalkParameters resolve_walk_parameters(const PartialColoringRequest& req);

/**
 * Lovett-Meka style edge walk.
 *
 * Each step samples a standard Gaussian, projects it orthogonally to the
 * coordinates of frozen variables and to the rows within gamma ||v_j|| of
 * their budget, and moves by gamma times that direction. A step that would
 * leave the box or cross a row budget is shortened so the first such
 * variable lands exactly on +-1 (and freezes) or the row lands exactly on
 * its budget (and joins the orthogonality set). The walk stops once half of
 * the variables are frozen or after T steps.
 *
 * Throws RejectedRequest if the potential condition fails and
 * InvalidParameter on malformed input. Returns Exhausted if all
 * max_restarts + 1 attempts fail. Results are re-verified from scratch.
 */
PartialColoringOutcome partial_color(const PartialColoringRequest& req);

/// One walk with the attempt-th derived seed; empty on failure.
/// Performs the same validation as partial_color.
std::optional<PartialColoringResult> partial_color_attempt(const PartialColoringRequest& req,
                                                           std::size_t attempt);

/// Recomputes both result guarantees from scratch.
bool verify_partial_coloring(const PartialColoringRequest& req, const PartialColoringResult& result,
                             double slack = 1e-7);

}  // namespace discrepancy
