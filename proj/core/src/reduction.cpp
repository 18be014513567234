#include "discrepancy/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "discrepancy/beck_fiala.hpp"
#include "discrepancy/errors.hpp"
#include "discrepancy/lp_core.hpp"

namespace discrepancy {

namespace {

double beck_fiala_ceiling(std::size_t t) {
  return t == 0 ? 0.0 : 2.0 * static_cast<double>(t) - 1.0;
}

Eigen::VectorXd as_vector(const DiscrepancyVector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.values.data(),
                                           static_cast<Eigen::Index>(v.values.size()));
}

SolveReport whole_system_fallback(const SetSystem& sys, FallbackReason reason) {
  SolveReport report;
  report.coloring = beck_fiala_color(sys);
  report.fallback_used = true;
  report.fallback_reason = reason;
  report.discrepancy_abs = discrepancy(sys, report.coloring);
  report.discrepancy_inf = report.discrepancy_abs;
  report.claimed_bound = beck_fiala_ceiling(sys.degree());
  return report;
}

}  // namespace

ReductionOutcome reduce(const SetSystem& sys, std::size_t k, double tol) {
  const std::size_t n = sys.num_elements();
  if (k == 0 || k > n) {
    throw InvalidParameter("head size k = " + std::to_string(k) + " must lie in [1, " +
                           std::to_string(n) + "]");
  }
  const SetSystem tail = sys.slice(k, n);
  const SetSystem head = sys.slice(0, k);
  Coloring tail_coloring = beck_fiala_color(tail);
  DiscrepancyVector b = discrepancy_vector(tail, tail_coloring);

  const bool b_is_zero =
      std::all_of(b.values.begin(), b.values.end(), [](double v) { return v == 0.0; });
  if (b_is_zero) {
    return ReductionResult{std::move(tail_coloring), std::move(b), Coloring::zeros(k), k};
  }

  LpOptions opts;
  opts.tol = tol;
  const FeasibilityResult lp =
      solve_feasible(BoxedLinearSystem::unit_box(head.incidence(), -as_vector(b)), opts);
  if (!lp.feasible()) {
    return HeadInfeasible{std::move(b), lp.infeasible().certificate, std::move(tail_coloring)};
  }
  return ReductionResult{std::move(tail_coloring), std::move(b), Coloring(lp.point()), k};
}

std::size_t default_head_size(std::size_t m, double C) {
  if (!(C > 0.0)) throw InvalidParameter("head size constant must be positive");
  const double l = std::log(static_cast<double>(std::max<std::size_t>(m, 3)));
  return static_cast<std::size_t>(std::ceil(C * static_cast<double>(m) * l * l));
}

SolveReport solve_full(const SetSystem& sys, const PhaseConfig& cfg, std::size_t k) {
  const std::size_t n = sys.num_elements();
  if (n <= k) {
    SolveReport report = solve(sys, cfg);
    report.head_size = n;
    return report;
  }

  ReductionOutcome outcome = reduce(sys, k, cfg.tol);
  if (std::holds_alternative<HeadInfeasible>(outcome)) {
    SolveReport report = whole_system_fallback(sys, FallbackReason::head_infeasible);
    report.head_infeasible = true;
    report.head_size = k;
    return report;
  }
  auto& reduction = std::get<ReductionResult>(outcome);

  const SetSystem head = sys.slice(0, k);
  SolveReport head_report = solve(head, reduction.head_fractional, cfg);

  std::vector<double> combined(n);
  for (Index i = 0; i < k; ++i) combined[i] = head_report.coloring[i];
  for (Index i = k; i < n; ++i) combined[i] = reduction.tail_coloring[i - k];
  Coloring coloring(std::move(combined));
  const double total = discrepancy(sys, coloring);

  if (head_report.fallback_used || total > beck_fiala_ceiling(sys.degree())) {
    const FallbackReason reason =
        head_report.fallback_used ? head_report.fallback_reason : FallbackReason::ceiling;
    SolveReport report = whole_system_fallback(sys, reason);
    report.phase_trace = std::move(head_report.phase_trace);
    report.abort_iteration = head_report.abort_iteration;
    report.head_size = k;
    return report;
  }

  SolveReport report = std::move(head_report);
  report.coloring = std::move(coloring);
  report.discrepancy_abs = total;
  report.discrepancy_inf = total;
  report.claimed_bound += cfg.tol;
  report.head_size = k;
  return report;
}

ContainmentVerdict containment_check_detailed(const Eigen::MatrixXd& head, std::size_t t,
                                              double tol) {
  const auto m = head.rows();
  if (m > static_cast<Eigen::Index>(kMaxContainmentRows)) {
    throw CapacityError("containment check enumerates 2^m vertices; m = " + std::to_string(m) +
                        " exceeds " + std::to_string(kMaxContainmentRows));
  }
  const double radius = 2.0 * static_cast<double>(t);
  LpOptions opts;
  opts.tol = tol;

  ContainmentVerdict verdict;
  verdict.contained = true;
  Eigen::VectorXd q(m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    for (Eigen::Index j = 0; j < m; ++j) q(j) = (mask >> j) & 1U ? radius : -radius;
    const FeasibilityResult lp = solve_feasible(BoxedLinearSystem::unit_box(head, q), opts);
    if (lp.feasible()) continue;
    Eigen::VectorXd y = lp.infeasible().certificate;
    const double l1 = y.lpNorm<1>();
    if (l1 > 0.0) y /= l1;
    verdict.contained = false;
    verdict.witness_vertex = q;
    verdict.dual_norm = (y.transpose() * head).lpNorm<1>();
    verdict.dual_direction = std::move(y);
    break;
  }
  return verdict;
}

bool containment_check_exact(const Eigen::MatrixXd& head, std::size_t t, double tol) {
  return containment_check_detailed(head, t, tol).contained;
}

DualSample dual_condition_sample(const Eigen::MatrixXd& head, std::size_t t, std::size_t trials,
                                 Seed seed, const std::vector<Eigen::VectorXd>& extra) {
  if (trials == 0) throw InvalidParameter("dual_condition_sample needs trials >= 1");
  const auto m = head.rows();
  DualSample best;
  best.min_norm = std::numeric_limits<double>::infinity();

  auto consider = [&](const Eigen::VectorXd& y) {
    const double norm = (y.transpose() * head).lpNorm<1>();
    if (norm < best.min_norm) {
      best.min_norm = norm;
      best.argmin = y;
    }
  };

  for (Eigen::Index j = 0; j < m; ++j) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
      y(j) = s;
      consider(y);
    }
  }
  for (const auto& direction : extra) {
    if (direction.size() != m) throw InvalidParameter("extra direction has the wrong length");
    const double l1 = direction.lpNorm<1>();
    if (l1 > 0.0) consider(direction / l1);
  }

  Rng rng = make_rng(seed);
  std::exponential_distribution<double> magnitude(1.0);
  std::bernoulli_distribution negative(0.5);
  Eigen::VectorXd y(m);
  for (std::size_t trial = 0; m > 0 && trial < trials; ++trial) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double e = magnitude(rng);
      y(j) = negative(rng) ? -e : e;
    }
    consider(y / y.lpNorm<1>());
  }

  if (m == 0) return DualSample{0.0, Eigen::VectorXd(), false};  // nothing to contain
  // Containment forces ||y^T A||_1 >= 2t for every unit y, so only a value
  // strictly below 2t is a certificate; equality is the boundary case.
  const double radius = 2.0 * static_cast<double>(t);
  best.certifies_failure = best.min_norm < radius - 1e-9 * std::max(radius, 1.0);
  return best;
}

}  // namespace discrepancy
