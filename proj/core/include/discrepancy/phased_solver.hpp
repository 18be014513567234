#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "discrepancy/rng.hpp"
#include "discrepancy/set_system.hpp"

namespace discrepancy {

/// Knobs of the phased solver. Every field is exposed on the command line.
struct PhaseConfig {
  /// Budget constant: Phase 1 budgets c sqrt(t) / i^2, Phase 2 cutoff c sqrt(t).
  double c = 96.0;
  /// Freeze threshold shared by every iteration; <= 0 means 1/n.
  double delta = 0.0;
  double tol = 1e-8;
  Seed seed = 0;
  std::size_t max_restarts_per_iteration = 10;
  /// Edge-walk step size; unset means the formula driven by delta.
  std::optional<double> step_size = 0.02;
  std::optional<std::size_t> step_count;
  /// Replace an output above the Beck-Fiala ceiling 2t - 1 by the
  /// Beck-Fiala coloring.
  bool ceiling_guard = true;

  void validate() const;
};

enum class Phase { basic_solution, budgeted, big_rows, endgame };

const char* to_string(Phase phase);

/// One iteration of the solver, with full before/after snapshots so every
/// guarantee can be re-derived from the trace.
struct IterationRecord {
  Phase phase = Phase::basic_solution;
  std::size_t iteration = 0;  // i; 0 for the basic-solution step
  std::size_t alive_before = 0;
  std::size_t alive_after = 0;
  /// Phase 1: the absolute per-row budget d_i. Phase 2: the big-row cutoff.
  double budget = 0.0;
  double potential = 0.0;
  double potential_limit = 0.0;
  std::size_t restarts_used = 0;
  bool aborted = false;
  std::string abort_reason;
  std::vector<Index> alive_columns;  // alive set entering the iteration
  Eigen::VectorXd x_before;          // full-length state
  Eigen::VectorXd x_after;
};

enum class FallbackReason { none, potential, exhausted, ceiling, head_infeasible };

const char* to_string(FallbackReason reason);

struct SolveReport {
  Coloring coloring;             // integral
  double discrepancy_inf = 0.0;  // ||A (chi - x0)||_inf
  double discrepancy_abs = 0.0;  // ||A chi||_inf
  std::vector<IterationRecord> phase_trace;
  bool fallback_used = false;
  FallbackReason fallback_reason = FallbackReason::none;
  std::optional<std::size_t> abort_iteration;
  /// max over rows of the bound implied by the trace; see claimed_row_bounds.
  double claimed_bound = 0.0;
  // Filled by the reduction pipeline.
  std::optional<std::size_t> head_size;
  bool head_infeasible = false;
};

/**
 * Phase 0 moves x0 to a basic feasible solution of A x = A x0 inside the
 * box, leaving at most rank(A) <= m alive variables. Phase 1 runs partial
 * coloring for i = 1..ceil(log2 t) with absolute row budgets c sqrt(t) / i^2;
 * Phase 2 continues with budget 0 on rows holding more than c sqrt(t) alive
 * columns and no budget on the others. Either phase aborts when the
 * potential condition fails (or partial coloring exhausts its restarts) and
 * the solver returns the Beck-Fiala coloring from 0 instead. Phase 1 always
 * runs its full schedule (or until nothing is alive); Phase 2 stops once at
 * most max(2 c sqrt(t), 8) variables are alive. Frozen variables are then
 * rounded to the nearest sign and the rest are signed greedily.
 */
SolveReport solve(const SetSystem& sys, const Coloring& x0, const PhaseConfig& cfg);

inline SolveReport solve(const SetSystem& sys, const PhaseConfig& cfg) {
  return solve(sys, Coloring::zeros(sys.num_elements()), cfg);
}

/// ceil(log2 t), 0 for t <= 1.
std::size_t budgeted_iterations(std::size_t t);

/// max(2 c sqrt(t), 8).
double endgame_threshold(double c, std::size_t t);

/**
 * Per-row upper bound on |(A (chi - x0))_j| recomputed from a
 * non-aborted trace: the Phase 1 budgets, plus twice the row's alive size at
 * the first point where it is no longer held at zero (a small row in
 * Phase 2 or the endgame), plus the recorded rounding moves of its frozen
 * members, plus tol. Runs that fell back get 2t - 1 on every row.
 */
std::vector<double> claimed_row_bounds(const SetSystem& sys, const SolveReport& report,
                                       const PhaseConfig& cfg);

}  // namespace discrepancy
