#include "discrepancy/set_system.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "discrepancy/errors.hpp"

namespace discrepancy {

namespace {

constexpr double kBoxSlack = 1e-9;

ColoringKind classify(const std::vector<double>& v) {
  for (double x : v) {
    if (x != 1.0 && x != -1.0) return ColoringKind::fractional;
  }
  return ColoringKind::integral;
}

void clamp_into_box(std::vector<double>& v) {
  for (double& x : v) {
    if (!std::isfinite(x) || std::abs(x) > 1.0 + kBoxSlack) {
      throw InvalidParameter("coloring entry " + std::to_string(x) + " outside [-1, 1]");
    }
    x = std::clamp(x, -1.0, 1.0);
  }
}

}  // namespace

SetSystem::SetSystem(std::size_t num_sets, std::size_t degree,
                     std::vector<std::vector<Index>> membership)
    : n_(membership.size()), m_(num_sets), t_(degree) {
  if (t_ > m_) {
    throw InvalidParameter("degree t=" + std::to_string(t_) +
                           " exceeds set count m=" + std::to_string(m_));
  }
  membership_.reserve(n_ * t_);
  for (Index i = 0; i < n_; ++i) {
    auto& sets = membership[i];
    if (sets.size() != t_) {
      throw InvalidParameter("element " + std::to_string(i) + " lies in " +
                             std::to_string(sets.size()) + " sets, expected " + std::to_string(t_));
    }
    std::sort(sets.begin(), sets.end());
    for (std::size_t r = 0; r < sets.size(); ++r) {
      if (sets[r] >= m_) {
        throw InvalidParameter("element " + std::to_string(i) + " references set " +
                               std::to_string(sets[r]) + " >= m");
      }
      if (r > 0 && sets[r] == sets[r - 1]) {
        throw InvalidParameter("element " + std::to_string(i) + " lists set " +
                               std::to_string(sets[r]) + " twice");
      }
    }
    membership_.insert(membership_.end(), sets.begin(), sets.end());
  }
}

std::vector<std::vector<Index>> SetSystem::rows() const {
  std::vector<std::vector<Index>> out(m_);
  for (Index i = 0; i < n_; ++i) {
    for (Index j : sets_of(i)) out[j].push_back(i);
  }
  return out;
}

std::vector<std::size_t> SetSystem::set_sizes() const {
  std::vector<std::size_t> sizes(m_, 0);
  for (Index j : membership_) ++sizes[j];
  return sizes;
}

Eigen::MatrixXd SetSystem::incidence() const {
  Eigen::MatrixXd a =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(n_));
  for (Index i = 0; i < n_; ++i) {
    for (Index j : sets_of(i)) {
      a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
  }
  return a;
}

SetSystem SetSystem::slice(Index begin, Index end) const {
  if (begin > end || end > n_) throw InvalidParameter("slice bounds out of range");
  std::vector<Index> ids(end - begin);
  std::iota(ids.begin(), ids.end(), begin);
  return select(ids);
}

SetSystem SetSystem::select(std::span<const Index> elements) const {
  std::vector<std::vector<Index>> membership;
  membership.reserve(elements.size());
  for (Index i : elements) {
    if (i >= n_) throw InvalidParameter("element index out of range");
    auto sets = sets_of(i);
    membership.emplace_back(sets.begin(), sets.end());
  }
  return SetSystem(m_, t_, std::move(membership));
}

void SetSystem::write(std::ostream& out) const {
  out << n_ << ' ' << m_ << ' ' << t_ << '\n';
  for (Index i = 0; i < n_; ++i) {
    auto sets = sets_of(i);
    for (std::size_t r = 0; r < sets.size(); ++r) {
      if (r > 0) out << ' ';
      out << sets[r];
    }
    out << '\n';
  }
}

std::string SetSystem::to_string() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

SetSystem SetSystem::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("empty set-system file");
  std::istringstream header(line);
  long long n = -1, m = -1, t = -1;
  if (!(header >> n >> m >> t) || n < 0 || m < 0 || t < 0) {
    throw InvalidParameter("malformed header line: '" + line + "'");
  }
  std::vector<std::vector<Index>> membership(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw InvalidParameter("expected " + std::to_string(n) + " element lines, got " +
                             std::to_string(i));
    }
    std::istringstream row(line);
    long long j = 0;
    while (row >> j) {
      if (j < 0) throw InvalidParameter("negative set index on line " + std::to_string(i + 2));
      membership[static_cast<std::size_t>(i)].push_back(static_cast<Index>(j));
    }
    if (!row.eof()) {
      throw InvalidParameter("non-numeric token on line " + std::to_string(i + 2));
    }
  }
  return SetSystem(static_cast<std::size_t>(m), static_cast<std::size_t>(t), std::move(membership));
}

SetSystem SetSystem::parse(const std::string& text) {
  std::istringstream in(text);
  return read(in);
}

Coloring::Coloring(std::vector<double> values) : values_(std::move(values)) {
  clamp_into_box(values_);
  kind_ = classify(values_);
}

Coloring::Coloring(const Eigen::VectorXd& values)
    : Coloring(std::vector<double>(values.data(), values.data() + values.size())) {}

Coloring Coloring::zeros(std::size_t n) {
  return Coloring(std::vector<double>(n, 0.0));
}

Coloring Coloring::from_signs(std::span<const int> signs) {
  std::vector<double> v;
  v.reserve(signs.size());
  for (int s : signs) {
    if (s != 1 && s != -1) throw InvalidParameter("sign must be +1 or -1");
    v.push_back(static_cast<double>(s));
  }
  return Coloring(std::move(v));
}

Eigen::VectorXd Coloring::to_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(),
                                           static_cast<Eigen::Index>(values_.size()));
}

double DiscrepancyVector::max_abs() const noexcept {
  double best = 0.0;
  for (double v : values) best = std::max(best, std::abs(v));
  return best;
}

SetSystem generate_random(std::size_t n, std::size_t m, std::size_t t, Seed seed) {
  if (t > m) {
    throw InvalidParameter("degree t=" + std::to_string(t) +
                           " exceeds set count m=" + std::to_string(m));
  }
  Rng rng = make_rng(seed);
  // Partial Fisher-Yates over a reusable pool; swaps are undone after every
  // element so each draw starts from the identity permutation.
  std::vector<Index> pool(m);
  std::iota(pool.begin(), pool.end(), Index{0});
  std::vector<std::pair<Index, Index>> swaps(t);
  std::vector<std::vector<Index>> membership(n);
  for (Index i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < t; ++r) {
      std::uniform_int_distribution<Index> pick(r, m - 1);
      Index s = pick(rng);
      std::swap(pool[r], pool[s]);
      swaps[r] = {r, s};
    }
    membership[i].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(t));
    for (std::size_t r = t; r-- > 0;) std::swap(pool[swaps[r].first], pool[swaps[r].second]);
  }
  return SetSystem(m, t, std::move(membership));
}

DiscrepancyVector discrepancy_vector(const SetSystem& sys, std::span<const double> x) {
  if (x.size() != sys.num_elements()) {
    throw InvalidParameter("coloring length " + std::to_string(x.size()) +
                           " does not match n=" + std::to_string(sys.num_elements()));
  }
  DiscrepancyVector out{std::vector<double>(sys.num_sets(), 0.0)};
  for (Index i = 0; i < x.size(); ++i) {
    for (Index j : sys.sets_of(i)) out.values[j] += x[i];
  }
  return out;
}

DiscrepancyVector discrepancy_vector(const SetSystem& sys, const Coloring& x) {
  return discrepancy_vector(sys, x.values());
}

double discrepancy(const SetSystem& sys, const Coloring& x) {
  return discrepancy_vector(sys, x).max_abs();
}

double deviation(const SetSystem& sys, const Coloring& x, const Coloring& x0) {
  if (x.size() != x0.size()) throw InvalidParameter("coloring lengths differ");
  std::vector<double> diff(x.size());
  for (Index i = 0; i < x.size(); ++i) diff[i] = x[i] - x0[i];
  return discrepancy_vector(sys, diff).max_abs();
}

std::pair<Coloring, double> brute_force_optimum(const SetSystem& sys) {
  const std::size_t n = sys.num_elements();
  if (n > kMaxBruteForceElements) {
    throw CapacityError("brute force limited to n <= " + std::to_string(kMaxBruteForceElements) +
                        ", got n=" + std::to_string(n));
  }
  if (n == 0) return {Coloring{}, 0.0};

  // chi and -chi have equal discrepancy, so the last element stays at -1 and
  // a Gray code walks the remaining n-1 signs, one flip per step.
  std::vector<long long> sums(sys.num_sets(), 0);
  for (Index i = 0; i < n; ++i) {
    for (Index j : sys.sets_of(i)) sums[j] -= 1;
  }
  auto current_max = [&] {
    long long best = 0;
    for (long long s : sums) best = std::max(best, s < 0 ? -s : s);
    return best;
  };
  std::vector<int> signs(n, -1);
  std::vector<int> best_signs = signs;
  long long best = current_max();
  const std::uint64_t steps = std::uint64_t{1} << (n - 1);
  for (std::uint64_t g = 1; g < steps && best > 0; ++g) {
    const auto bit = static_cast<Index>(std::countr_zero(g));
    signs[bit] = -signs[bit];
    for (Index j : sys.sets_of(bit)) sums[j] += 2 * signs[bit];
    long long value = current_max();
    if (value < best) {
      best = value;
      best_signs = signs;
    }
  }
  return {Coloring::from_signs(best_signs), static_cast<double>(best)};
}

}  // namespace discrepancy
