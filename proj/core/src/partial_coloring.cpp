#include "discrepancy/partial_coloring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "discrepancy/errors.hpp"

namespace discrepancy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const PartialColoringRequest& req) {
  const Eigen::Index n = req.start.size();
  if (req.rows.cols() != n && req.rows.rows() > 0) {
    throw InvalidParameter("constraint rows have " + std::to_string(req.rows.cols()) +
                           " columns, start has " + std::to_string(n));
  }
  if (static_cast<Eigen::Index>(req.budgets.size()) != req.rows.rows()) {
    throw InvalidParameter("one budget per constraint row required");
  }
  for (double c : req.budgets) {
    if (std::isnan(c) || c < 0.0) throw InvalidParameter("budgets must be >= 0");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(req.start(i)) <= 1.0 + 1e-9)) {
      throw InvalidParameter("start point outside [-1, 1]^n");
    }
  }
  if (req.delta >= 1.0 || std::isnan(req.delta)) {
    throw InvalidParameter("delta must lie in (0, 1)");
  }
  if (req.step_size && !(*req.step_size > 0.0)) {
    throw InvalidParameter("step size must be positive");
  }
  const double pot = potential(req.budgets);
  const double limit = static_cast<double>(n) / 16.0;
  if (pot > limit) {
    throw RejectedRequest(
        "potential " + std::to_string(pot) + " exceeds n/16 = " + std::to_string(limit), pot,
        limit);
  }
}

std::size_t count_frozen(const Eigen::VectorXd& x, double delta) {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) >= 1.0 - delta) ++count;
  }
  return count;
}

class EdgeWalk {
 public:
  EdgeWalk(const PartialColoringRequest& req, const WalkParameters& params, Seed seed)
      : req_(req), params_(params), rng_(make_rng(seed)) {
    n_ = req.start.size();
    m_ = req.rows.rows();
    x_ = req.start.cwiseMax(-1.0).cwiseMin(1.0);
    norms_ = req.rows.rowwise().norm();
    limits_.resize(m_);
    constrained_.assign(static_cast<std::size_t>(m_), false);
    for (Eigen::Index j = 0; j < m_; ++j) {
      const double c = req.budgets[static_cast<std::size_t>(j)];
      limits_(j) = std::isfinite(c) ? c * norms_(j) : kInf;
      constrained_[static_cast<std::size_t>(j)] = std::isfinite(c) && norms_(j) > 0.0;
    }
    active_.assign(static_cast<std::size_t>(m_), false);
    row_values_ = Eigen::VectorXd::Zero(m_);
    frozen_.assign(static_cast<std::size_t>(n_), false);
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (std::abs(x_(i)) >= 1.0 - params.delta) freeze(i);
    }
  }

  std::optional<PartialColoringResult> run() {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double gamma = params_.step_size;
    Eigen::VectorXd g(n_);
    for (std::size_t step = 0; step < params_.step_count; ++step) {
      if (2 * frozen_count_ >= static_cast<std::size_t>(n_)) break;

      for (Eigen::Index j = 0; j < m_; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (constrained_[uj] && !active_[uj] &&
            std::abs(row_values_(j)) >= limits_(j) - gamma * norms_(j)) {
          activate(j);
        }
      }
      if (dirty_) rebuild_basis();
      if (basis_.cols() >= static_cast<Eigen::Index>(n_ - frozen_count_)) break;

      for (Eigen::Index i = 0; i < n_; ++i) {
        g(i) = frozen_[static_cast<std::size_t>(i)] ? 0.0 : gauss(rng_);
      }
      if (basis_.cols() > 0) g -= basis_ * (basis_.transpose() * g);
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (frozen_[static_cast<std::size_t>(i)]) g(i) = 0.0;
      }

      // Shorten the step so no coordinate leaves the box and no free row
      // crosses its budget.
      double lambda = gamma;
      Eigen::Index hit_coord = -1, hit_row = -1;
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (g(i) == 0.0) continue;
        const double limit = g(i) > 0 ? (1.0 - x_(i)) / g(i) : (-1.0 - x_(i)) / g(i);
        if (limit < lambda) {
          lambda = std::max(limit, 0.0);
          hit_coord = i;
          hit_row = -1;
        }
      }
      const Eigen::VectorXd dv = m_ > 0 ? Eigen::VectorXd(req_.rows * g) : Eigen::VectorXd();
      for (Eigen::Index j = 0; j < m_; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (!constrained_[uj] || active_[uj] || dv(j) == 0.0) continue;
        const double bound = dv(j) > 0 ? limits_(j) : -limits_(j);
        const double limit = (bound - row_values_(j)) / dv(j);
        if (limit < lambda) {
          lambda = std::max(limit, 0.0);
          hit_row = j;
          hit_coord = -1;
        }
      }

      x_ += lambda * g;
      row_values_ += lambda * dv;
      if (hit_coord >= 0) x_(hit_coord) = g(hit_coord) > 0 ? 1.0 : -1.0;
      if (hit_row >= 0) activate(hit_row);
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (frozen_[static_cast<std::size_t>(i)]) continue;
        x_(i) = std::clamp(x_(i), -1.0, 1.0);
        if (std::abs(x_(i)) >= 1.0 - params_.delta) freeze(i);
      }
    }

    if (2 * frozen_count_ < static_cast<std::size_t>(n_)) return std::nullopt;
    PartialColoringResult result;
    result.point = x_;
    result.frozen_mask.resize(static_cast<std::size_t>(n_));
    for (Eigen::Index i = 0; i < n_; ++i) {
      result.frozen_mask[static_cast<std::size_t>(i)] = std::abs(x_(i)) >= 1.0 - params_.delta;
    }
    return result;
  }

 private:
  void freeze(Eigen::Index i) {
    frozen_[static_cast<std::size_t>(i)] = true;
    ++frozen_count_;
    dirty_ = true;
  }

  void activate(Eigen::Index j) {
    active_[static_cast<std::size_t>(j)] = true;
    dirty_ = true;
  }

  // Orthonormal basis (Gram-Schmidt, two passes) of the active rows
  // restricted to alive coordinates.
  void rebuild_basis() {
    std::vector<Eigen::VectorXd> cols;
    for (Eigen::Index j = 0; j < m_; ++j) {
      if (!active_[static_cast<std::size_t>(j)]) continue;
      Eigen::VectorXd u = req_.rows.row(j).transpose();
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (frozen_[static_cast<std::size_t>(i)]) u(i) = 0.0;
      }
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : cols) u -= q.dot(u) * q;
      }
      const double len = u.norm();
      if (len > 1e-9 * std::max(norms_(j), 1.0)) cols.push_back(u / len);
    }
    basis_.resize(n_, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      basis_.col(static_cast<Eigen::Index>(c)) = cols[c];
    dirty_ = false;
  }

  const PartialColoringRequest& req_;
  WalkParameters params_;
  Rng rng_;
  Eigen::Index n_ = 0, m_ = 0;
  Eigen::VectorXd x_, norms_, limits_, row_values_;
  std::vector<bool> constrained_, active_, frozen_;
  std::size_t frozen_count_ = 0;
  Eigen::MatrixXd basis_;
  bool dirty_ = true;
};

}  // namespace

std::size_t PartialColoringResult::frozen_count() const {
  return static_cast<std::size_t>(std::count(frozen_mask.begin(), frozen_mask.end(), true));
}

double potential(const std::vector<double>& budgets) {
  double sum = 0.0;
  for (double c : budgets) {
    if (std::isfinite(c)) sum += std::exp(-c * c / 16.0);
  }
  return sum;
}

bool potential_condition_holds(const std::vector<double>& budgets, std::size_t n) {
  return potential(budgets) <= static_cast<double>(n) / 16.0;
}

WalkParameters resolve_walk_parameters(const PartialColoringRequest& req) {
  const auto n = static_cast<double>(std::max<Eigen::Index>(req.start.size(), 1));
  std::size_t finite_rows = 0;
  for (double c : req.budgets) finite_rows += std::isfinite(c) ? 1 : 0;

  WalkParameters p;
  p.delta = req.delta > 0.0 ? req.delta : 1.0 / n;
  p.step_size = req.step_size.value_or(
      p.delta /
      std::sqrt(8.0 * std::log(std::max(n * static_cast<double>(finite_rows), 2.0) / p.delta)));
  p.step_count = req.step_count.value_or(
      static_cast<std::size_t>(std::ceil(16.0 / (p.step_size * p.step_size))));
  return p;
}

std::optional<PartialColoringResult> partial_color_attempt(const PartialColoringRequest& req,
                                                           std::size_t attempt) {
  validate(req);
  const WalkParameters params = resolve_walk_parameters(req);
  EdgeWalk walk(req, params, derive_seed(req.seed, attempt));
  auto result = walk.run();
  if (!result) return std::nullopt;
  result->restarts_used = attempt;
  if (!verify_partial_coloring(req, *result)) return std::nullopt;
  return result;
}

PartialColoringOutcome partial_color(const PartialColoringRequest& req) {
  validate(req);
  for (std::size_t attempt = 0; attempt <= req.max_restarts; ++attempt) {
    if (auto result = partial_color_attempt(req, attempt)) return std::move(*result);
  }
  return Exhausted{req.max_restarts + 1};
}

bool verify_partial_coloring(const PartialColoringRequest& req, const PartialColoringResult& result,
                             double slack) {
  const Eigen::Index n = req.start.size();
  if (result.point.size() != n) return false;
  const double delta = resolve_walk_parameters(req).delta;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(result.point(i)) <= 1.0)) return false;
  }
  if (2 * count_frozen(result.point, delta) < static_cast<std::size_t>(n)) return false;
  if (req.rows.rows() == 0) return true;
  const Eigen::VectorXd moved = req.rows * (result.point - req.start);
  for (Eigen::Index j = 0; j < req.rows.rows(); ++j) {
    const double c = req.budgets[static_cast<std::size_t>(j)];
    if (!std::isfinite(c)) continue;
    if (std::abs(moved(j)) > c * req.rows.row(j).norm() + slack) return false;
  }
  return true;
}

}  // namespace discrepancy
