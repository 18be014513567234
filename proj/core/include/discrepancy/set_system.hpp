#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "discrepancy/rng.hpp"

namespace discrepancy {

using Index = std::size_t;

/**
 * A t-regular set system on n elements and m sets.
 *
 * Stored column-major: for every element the sorted list of the t sets that
 * contain it. Row views (the members of each set) are materialized on demand.
 * Immutable after construction.
 */
class SetSystem {
 public:
  SetSystem() = default;

  /// Validates and canonicalizes (sorts) every membership list.
  /// Throws InvalidParameter unless each list has exactly `degree` distinct
  /// entries in [0, num_sets).
  SetSystem(std::size_t num_sets, std::size_t degree, std::vector<std::vector<Index>> membership);

  std::size_t num_elements() const noexcept { return n_; }
  std::size_t num_sets() const noexcept { return m_; }
  std::size_t degree() const noexcept { return t_; }

  /// Sets containing `element`, ascending.
  std::span<const Index> sets_of(Index element) const {
    return {membership_.data() + element * t_, t_};
  }

  /// Members of every set, ascending.
  std::vector<std::vector<Index>> rows() const;
  std::vector<std::size_t> set_sizes() const;

  /// Dense m x n 0/1 incidence matrix.
  Eigen::MatrixXd incidence() const;

  /// The subsystem on elements [begin, end), re-indexed from 0.
  SetSystem slice(Index begin, Index end) const;
  /// The subsystem on the listed elements, in the given order.
  SetSystem select(std::span<const Index> elements) const;

  /// Canonical text format: `n m t` then one line of t ascending set
  /// indices per element.
  void write(std::ostream& out) const;
  std::string to_string() const;
  static SetSystem read(std::istream& in);
  static SetSystem parse(const std::string& text);

  friend bool operator==(const SetSystem&, const SetSystem&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t t_ = 0;
  std::vector<Index> membership_;  // n_ * t_, element-major
};

enum class ColoringKind { fractional, integral };

/// A point of [-1, 1]^n. Integral when every entry is exactly +1 or -1.
class Coloring {
 public:
  Coloring() = default;

  /// Entries within 1e-9 outside the box are clamped; anything further out
  /// throws InvalidParameter.
  explicit Coloring(std::vector<double> values);
  explicit Coloring(const Eigen::VectorXd& values);

  static Coloring zeros(std::size_t n);
  static Coloring from_signs(std::span<const int> signs);

  std::size_t size() const noexcept { return values_.size(); }
  ColoringKind kind() const noexcept { return kind_; }
  bool is_integral() const noexcept { return kind_ == ColoringKind::integral; }

  std::span<const double> values() const noexcept { return values_; }
  double operator[](Index i) const { return values_[i]; }
  Eigen::VectorXd to_vector() const;

  friend bool operator==(const Coloring&, const Coloring&) = default;

 private:
  std::vector<double> values_;
  ColoringKind kind_ = ColoringKind::integral;
};

/// Signed row sums A x, one per set.
struct DiscrepancyVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double max_abs() const noexcept;
};

/// Each element independently joins a uniformly random t-subset of the m
/// sets. Deterministic given the seed.
SetSystem generate_random(std::size_t n, std::size_t m, std::size_t t, Seed seed);

DiscrepancyVector discrepancy_vector(const SetSystem& sys, std::span<const double> x);
DiscrepancyVector discrepancy_vector(const SetSystem& sys, const Coloring& x);

/// max_j |(A x)_j|.
double discrepancy(const SetSystem& sys, const Coloring& x);

/// max_j |(A (x - x0))_j|.
double deviation(const SetSystem& sys, const Coloring& x, const Coloring& x0);

/// Exhaustive minimum of max_j |(A chi)_j| over chi in {-1,+1}^n.
/// Refuses n > kMaxBruteForceElements with CapacityError.
inline constexpr std::size_t kMaxBruteForceElements = 24;
std::pair<Coloring, double> brute_force_optimum(const SetSystem& sys);

}  // namespace discrepancy
