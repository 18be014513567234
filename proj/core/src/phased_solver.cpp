#include "discrepancy/phased_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include "discrepancy/beck_fiala.hpp"
#include "discrepancy/errors.hpp"
#include "discrepancy/lp_core.hpp"
#include "discrepancy/partial_coloring.hpp"

namespace discrepancy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double beck_fiala_ceiling(std::size_t t) {
  return t == 0 ? 0.0 : 2.0 * static_cast<double>(t) - 1.0;
}

std::vector<Index> alive_columns(const Eigen::VectorXd& x, double delta) {
  std::vector<Index> alive;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) < 1.0 - delta) alive.push_back(static_cast<Index>(i));
  }
  return alive;
}

// Alive members per row.
std::vector<std::size_t> alive_sizes(const SetSystem& sys, const std::vector<Index>& alive) {
  std::vector<std::size_t> sizes(sys.num_sets(), 0);
  for (Index i : alive) {
    for (Index j : sys.sets_of(i)) ++sizes[j];
  }
  return sizes;
}

Eigen::MatrixXd restrict_columns(const SetSystem& sys, const std::vector<Index>& cols) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sys.num_sets()),
                                            static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (Index j : sys.sets_of(cols[c])) {
      v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = 1.0;
    }
  }
  return v;
}

double resolved_delta(const PhaseConfig& cfg, std::size_t n) {
  return cfg.delta > 0.0 ? cfg.delta : 1.0 / static_cast<double>(std::max<std::size_t>(n, 1));
}

}  // namespace

void PhaseConfig::validate() const {
  if (!(c > 0.0)) throw InvalidParameter("budget constant c must be positive");
  if (!(delta < 1.0)) throw InvalidParameter("delta must be below 1");
  if (!(tol > 0.0)) throw InvalidParameter("tol must be positive");
  if (step_size && !(*step_size > 0.0)) throw InvalidParameter("step size must be positive");
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::basic_solution: return "basic_solution";
    case Phase::budgeted: return "budgeted";
    case Phase::big_rows: return "big_rows";
    case Phase::endgame: return "endgame";
  }
  return "unknown";
}

const char* to_string(FallbackReason reason) {
  switch (reason) {
    case FallbackReason::none: return "none";
    case FallbackReason::potential: return "potential";
    case FallbackReason::exhausted: return "exhausted";
    case FallbackReason::ceiling: return "ceiling";
    case FallbackReason::head_infeasible: return "head_infeasible";
  }
  return "unknown";
}

std::size_t budgeted_iterations(std::size_t t) {
  std::size_t iters = 0;
  while ((std::size_t{1} << iters) < t) ++iters;
  return iters;
}

double endgame_threshold(double c, std::size_t t) {
  return std::max(2.0 * c * std::sqrt(static_cast<double>(t)), 8.0);
}

SolveReport solve(const SetSystem& sys, const Coloring& x0, const PhaseConfig& cfg) {
  cfg.validate();
  const std::size_t n = sys.num_elements();
  const std::size_t t = sys.degree();
  if (x0.size() != n) {
    throw InvalidParameter("start has length " + std::to_string(x0.size()) + ", expected " +
                           std::to_string(n));
  }
  const double sqrt_t = std::sqrt(static_cast<double>(t));
  const double delta = resolved_delta(cfg, n);
  const std::size_t phase_one_iters = budgeted_iterations(t);
  const double threshold = endgame_threshold(cfg.c, t);

  SolveReport report;
  Eigen::VectorXd x = x0.to_vector();

  {
    IterationRecord rec;
    rec.phase = Phase::basic_solution;
    rec.x_before = x;
    rec.alive_columns = alive_columns(x, delta);
    rec.alive_before = count_fractional(x, Eigen::VectorXd::Constant(x.size(), -1.0),
                                        Eigen::VectorXd::Constant(x.size(), 1.0), 0.0);
    const Eigen::MatrixXd a = sys.incidence();
    const Eigen::VectorXd target = a * x;
    LpOptions lp;
    lp.tol = cfg.tol;
    x = basic_feasible_solution(BoxedLinearSystem::unit_box(a, target), x, lp);
    rec.alive_after = count_fractional(x, Eigen::VectorXd::Constant(x.size(), -1.0),
                                       Eigen::VectorXd::Constant(x.size(), 1.0), 0.0);
    rec.x_after = x;
    report.phase_trace.push_back(std::move(rec));
  }

  bool aborted = false;
  for (std::size_t i = 1;; ++i) {
    std::vector<Index> alive = alive_columns(x, delta);
    if (alive.empty()) break;
    // The endgame threshold only ends Phase 2; Phase 1 runs its full schedule.
    if (i > phase_one_iters && static_cast<double>(alive.size()) <= threshold) break;

    IterationRecord rec;
    rec.iteration = i;
    rec.alive_before = alive.size();
    rec.x_before = x;
    const auto sizes = alive_sizes(sys, alive);
    std::vector<double> budgets(sys.num_sets(), kInf);
    if (i <= phase_one_iters) {
      rec.phase = Phase::budgeted;
      rec.budget = cfg.c * sqrt_t / static_cast<double>(i * i);
      for (std::size_t j = 0; j < budgets.size(); ++j) {
        if (sizes[j] > 0) budgets[j] = rec.budget / std::sqrt(static_cast<double>(sizes[j]));
      }
    } else {
      rec.phase = Phase::big_rows;
      rec.budget = cfg.c * sqrt_t;
      for (std::size_t j = 0; j < budgets.size(); ++j) {
        if (static_cast<double>(sizes[j]) > rec.budget) budgets[j] = 0.0;
      }
    }
    rec.potential = potential(budgets);
    rec.potential_limit = static_cast<double>(alive.size()) / 16.0;
    rec.alive_columns = alive;

    auto abort_with = [&](FallbackReason reason, std::string why) {
      rec.aborted = true;
      rec.abort_reason = std::move(why);
      rec.x_after = x;
      rec.alive_after = alive.size();
      report.phase_trace.push_back(std::move(rec));
      report.fallback_reason = reason;
      report.abort_iteration = i;
      aborted = true;
    };

    if (rec.potential > rec.potential_limit) {
      abort_with(FallbackReason::potential, "potential " + std::to_string(rec.potential) + " > " +
                                                std::to_string(rec.potential_limit));
      break;
    }

    PartialColoringRequest req;
    req.rows = restrict_columns(sys, alive);
    req.budgets = std::move(budgets);
    req.start.resize(static_cast<Eigen::Index>(alive.size()));
    for (std::size_t c = 0; c < alive.size(); ++c) {
      req.start(static_cast<Eigen::Index>(c)) = x(static_cast<Eigen::Index>(alive[c]));
    }
    req.delta = delta;
    req.seed = derive_seed(cfg.seed, i);
    req.max_restarts = cfg.max_restarts_per_iteration;
    req.step_size = cfg.step_size;
    req.step_count = cfg.step_count;

    const PartialColoringOutcome outcome = partial_color(req);
    if (std::holds_alternative<Exhausted>(outcome)) {
      abort_with(FallbackReason::exhausted, "partial coloring exhausted its restarts");
      break;
    }
    const auto& result = std::get<PartialColoringResult>(outcome);
    for (std::size_t c = 0; c < alive.size(); ++c) {
      x(static_cast<Eigen::Index>(alive[c])) = result.point(static_cast<Eigen::Index>(c));
    }
    rec.restarts_used = result.restarts_used;
    rec.x_after = x;
    rec.alive_after = alive_columns(x, delta).size();
    report.phase_trace.push_back(std::move(rec));
  }

  if (aborted) {
    report.fallback_used = true;
    report.coloring = beck_fiala_color(sys);
  } else {
    IterationRecord rec;
    rec.phase = Phase::endgame;
    rec.iteration = report.phase_trace.size();
    rec.alive_columns = alive_columns(x, delta);
    rec.alive_before = rec.alive_columns.size();
    rec.budget = threshold;
    rec.x_before = x;
    std::vector<double> values(x.data(), x.data() + x.size());
    std::vector<bool> is_alive(n, false);
    for (Index i : rec.alive_columns) is_alive[i] = true;
    for (Index i = 0; i < n; ++i) {
      if (!is_alive[i]) values[i] = values[i] >= 0.0 ? 1.0 : -1.0;
    }
    report.coloring = greedy_sign(sys, std::move(values), x0);
    rec.x_after = report.coloring.to_vector();
    report.phase_trace.push_back(std::move(rec));
  }

  report.discrepancy_inf = deviation(sys, report.coloring, x0);
  const double ceiling = beck_fiala_ceiling(t);
  if (!report.fallback_used && cfg.ceiling_guard && report.discrepancy_inf > ceiling) {
    Coloring alternative = beck_fiala_color(sys);
    const double alt = deviation(sys, alternative, x0);
    if (alt < report.discrepancy_inf) {
      report.coloring = std::move(alternative);
      report.discrepancy_inf = alt;
      report.fallback_used = true;
      report.fallback_reason = FallbackReason::ceiling;
    }
  }
  report.discrepancy_abs = discrepancy(sys, report.coloring);
  const auto bounds = claimed_row_bounds(sys, report, cfg);
  report.claimed_bound = bounds.empty() ? 0.0 : *std::max_element(bounds.begin(), bounds.end());
  return report;
}

std::vector<double> claimed_row_bounds(const SetSystem& sys, const SolveReport& report,
                                       const PhaseConfig& cfg) {
  const std::size_t m = sys.num_sets();
  if (report.fallback_used) {
    return std::vector<double>(m, beck_fiala_ceiling(sys.degree()));
  }
  double budget_sum = 0.0;
  std::vector<double> bounds(m, 0.0);
  std::vector<bool> released(m, false);
  const auto rows = sys.rows();
  for (const auto& rec : report.phase_trace) {
    if (rec.phase == Phase::budgeted) budget_sum += rec.budget;
    if (rec.phase != Phase::big_rows && rec.phase != Phase::endgame) continue;
    const auto sizes = alive_sizes(sys, rec.alive_columns);
    for (std::size_t j = 0; j < m; ++j) {
      const bool small = static_cast<double>(sizes[j]) <= rec.budget;
      if (!released[j] && (rec.phase == Phase::endgame || small)) {
        released[j] = true;
        bounds[j] += 2.0 * static_cast<double>(sizes[j]);
      }
    }
    if (rec.phase == Phase::endgame) {
      std::vector<bool> is_alive(sys.num_elements(), false);
      for (Index i : rec.alive_columns) is_alive[i] = true;
      for (std::size_t j = 0; j < m; ++j) {
        for (Index i : rows[j]) {
          if (is_alive[i]) continue;
          const auto e = static_cast<Eigen::Index>(i);
          bounds[j] += std::abs(rec.x_after(e) - rec.x_before(e));
        }
      }
    }
  }
  const double slack = 1e-6 + cfg.tol;
  for (double& b : bounds) b += budget_sum + slack;
  return bounds;
}

}  // namespace discrepancy
