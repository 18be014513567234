#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "discrepancy/phased_solver.hpp"
#include "discrepancy/rng.hpp"
#include "discrepancy/set_system.hpp"

namespace discrepancy::harness {

enum class Algorithm { beck_fiala, phased, full };

std::string_view to_string(Algorithm algorithm);
/// Accepts "beck-fiala", "phased", "full"; throws InvalidParameter otherwise.
Algorithm parse_algorithm(std::string_view name);

inline constexpr int kCsvVersion = 1;

struct SolveRow {
  std::size_t n = 0, m = 0, t = 0;
  Seed seed = 0;
  Algorithm algorithm = Algorithm::phased;
  double c = 0.0;
  double discrepancy = 0.0;
  bool fallback_used = false;
  std::optional<std::size_t> abort_iteration;
  double wall_ms = 0.0;
  // Not part of the CSV row; kept for summaries and acceptance checks.
  bool head_infeasible = false;
  FallbackReason fallback_reason = FallbackReason::none;
};

struct RunOptions {
  Algorithm algorithm = Algorithm::phased;
  PhaseConfig cfg;
  /// Head size for the full pipeline; unset means default_head_size(m, head_constant).
  std::optional<std::size_t> k;
  double head_constant = 4.0;
};

/// The solver seed is derived from `seed`, so an instance generated with
/// the same seed and solved from a file gives the same row.
SolveReport run_solver(const SetSystem& sys, Seed seed, const RunOptions& opts);
SolveRow run_one(const SetSystem& sys, Seed seed, const RunOptions& opts);
/// Generates the instance with generate_random(n, m, t, seed) first.
SolveRow run_one(std::size_t n, std::size_t m, std::size_t t, Seed seed, const RunOptions& opts);

/// `# discrepancy-csv v1 <kind>`, then the column names, then rows. With
/// include_timing false the wall_ms field is left empty so reruns compare
/// byte for byte.
void write_solve_csv(std::ostream& out, const std::vector<SolveRow>& rows,
                     bool include_timing = true);

struct SweepGrid {
  std::vector<std::size_t> n;  // empty: n = m in every cell
  std::vector<std::size_t> m;
  std::vector<std::size_t> t;
  std::vector<double> c{96.0};
  std::vector<double> head_constant{4.0};
  std::size_t seeds = 1;
  Seed master_seed = 0;
  RunOptions base;
  std::size_t jobs = 1;  // 0: one per hardware thread
};

struct CellSummary {
  std::size_t n = 0, m = 0, t = 0;
  double c = 0.0;
  double head_constant = 0.0;
  std::size_t runs = 0;
  double mean = 0.0, median = 0.0, max = 0.0;
  double median_over_sqrt_t = 0.0;
  double abort_rate = 0.0;
  double fallback_rate = 0.0;
  double head_infeasible_rate = 0.0;
};

struct SweepResult {
  std::vector<SolveRow> rows;  // cell-major, then seed index
  std::vector<CellSummary> summary;
};

/// Every cell of the cartesian product runs `seeds` instances; run r of
/// cell i uses derive_seed(master_seed, i, r), so the worker count never
/// changes the output.
SweepResult run_sweep(const SweepGrid& grid);
void write_summary_csv(std::ostream& out, Algorithm algorithm,
                       const std::vector<CellSummary>& summary);

struct ContainmentGrid {
  std::vector<std::size_t> m;
  std::vector<std::size_t> t;
  /// k = ceil(ratio * m * ln(max(m, 3))^2).
  std::vector<double> ratios;
  std::size_t seeds = 1;
  Seed master_seed = 0;
  /// The reduce experiment uses n = tail_factor * k elements.
  std::size_t tail_factor = 4;
  double tol = 1e-8;
  std::size_t jobs = 1;
};

struct ContainmentRow {
  std::size_t m = 0, t = 0, k = 0;
  double ratio = 0.0;
  Seed seed = 0;
  bool contained = false;
  bool reduce_feasible = false;
};

struct ContainmentSummary {
  std::size_t m = 0, t = 0, k = 0;
  double ratio = 0.0;
  std::size_t runs = 0;
  double contained_rate = 0.0;
  double feasible_rate = 0.0;
};

struct ContainmentSweepResult {
  std::vector<ContainmentRow> rows;
  std::vector<ContainmentSummary> summary;
};

ContainmentSweepResult run_containment_sweep(const ContainmentGrid& grid);
void write_containment_csv(std::ostream& out, const std::vector<ContainmentRow>& rows);
void write_containment_summary_csv(std::ostream& out,
                                   const std::vector<ContainmentSummary>& summary);

struct CheckReport {
  bool contained = false;
  bool exact = false;  // false: sampled, evidence only
  std::size_t m = 0, k = 0, t = 0;
  double min_dual_norm = 0.0;  // smallest ||y^T A||_1 seen (sampled or certificate)
};

/// Exact vertex enumeration for m <= 16, dual sampling above that. With
/// force_exact the enumeration is used regardless, so m > 16 throws
/// CapacityError.
CheckReport check_containment(const SetSystem& head, std::size_t t, std::size_t trials, Seed seed,
                              double tol = 1e-8, bool force_exact = false);
void write_check_report(std::ostream& out, const CheckReport& report);

/// Runs fn(i) for i in [0, count) on `jobs` threads (0 = hardware threads).
/// The first exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace discrepancy::harness
