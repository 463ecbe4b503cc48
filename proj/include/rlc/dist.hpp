#pragma once

// Discrete distributions on integer windows, exact total variation, and
// certificates for (relative) log-concavity.
//
// Two mass types are supported: double (the working path, with explicit
// tolerances) and Rational (the exact path used by oracles and certificates on
// small windows). Algorithms are written once as templates over the mass type.

#include "rlc/errors.hpp"
#include "rlc/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rlc {

using Index = std::int64_t;

/// Finitely supported mass sequence on the window [offset, offset + size).
///
/// Masses are non-negative but need not sum to one, so reference measures such
/// as a counting window are representable. `tail_deficit` is probability lost
/// to truncating an infinite-support family (zero for finite families).
template <class Mass>
class BasicDist {
 public:
  BasicDist(Index offset, std::vector<Mass> masses, Mass tail_deficit = Mass(0))
      : offset_(offset), masses_(std::move(masses)), tail_deficit_(std::move(tail_deficit)) {
    if (masses_.empty()) throw InvalidInput("distribution needs at least one mass");
    for (const Mass& m : masses_) {
      if (!(m >= Mass(0))) throw InvalidInput("masses must be non-negative");
    }
    if (!(tail_deficit_ >= Mass(0))) throw InvalidInput("tail deficit must be non-negative");
  }

  static BasicDist point_mass(Index at) { return BasicDist(at, {Mass(1)}); }

  /// Counting measure (unit masses) on [first, last].
  static BasicDist counting(Index first, Index last) {
    if (last < first) throw InvalidInput("empty counting window");
    return BasicDist(first, std::vector<Mass>(static_cast<std::size_t>(last - first + 1), Mass(1)));
  }

  Index offset() const noexcept { return offset_; }
  Index last() const noexcept { return offset_ + static_cast<Index>(masses_.size()) - 1; }
  std::size_t size() const noexcept { return masses_.size(); }
  std::span<const Mass> masses() const noexcept { return masses_; }
  const Mass& tail_deficit() const noexcept { return tail_deficit_; }

  /// Mass at integer k; zero outside the window.
  Mass at(Index k) const {
    if (k < offset_ || k > last()) return Mass(0);
    return masses_[static_cast<std::size_t>(k - offset_)];
  }

  Mass total_mass() const {
    Mass s(0);
    for (const Mass& m : masses_) s += m;
    return s;
  }

  /// First and last index carrying positive mass, if any.
  std::optional<std::pair<Index, Index>> support() const {
    std::optional<std::pair<Index, Index>> out;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
      if (masses_[i] > Mass(0)) {
        const Index k = offset_ + static_cast<Index>(i);
        if (!out) out.emplace(k, k);
        out->second = k;
      }
    }
    return out;
  }

  bool support_is_interval() const {
    const auto s = support();
    if (!s) return false;
    for (Index k = s->first; k <= s->second; ++k) {
      if (!(at(k) > Mass(0))) return false;
    }
    return true;
  }

  BasicDist shifted(Index by) const { return BasicDist(offset_ + by, masses_, tail_deficit_); }

  /// Copy with leading and trailing zero masses removed (window kept non-empty).
  BasicDist trimmed() const {
    const auto s = support();
    if (!s) return *this;
    std::vector<Mass> m(masses_.begin() + (s->first - offset_), masses_.begin() + (s->second - offset_) + 1);
    return BasicDist(s->first, std::move(m), tail_deficit_);
  }

  friend bool operator==(const BasicDist&, const BasicDist&) = default;

 private:
  Index offset_;
  std::vector<Mass> masses_;
  Mass tail_deficit_;
};

using DiscreteDist = BasicDist<double>;
using ExactDist = BasicDist<Rational>;

template <class T>
struct Interval {
  T lo;
  T hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};
using TvInterval = Interval<double>;

struct LogConcavityCertificate {
  bool holds = false;
  std::optional<Index> first_violation;
  bool support_is_interval = false;
  friend bool operator==(const LogConcavityCertificate&, const LogConcavityCertificate&) = default;
};

DiscreteDist to_double(const ExactDist& d);
ExactDist to_exact(const DiscreteDist& d);

/// Normalized copy of the given masses with zero tail deficit.
template <class Mass>
BasicDist<Mass> make_dist(Index offset, std::span<const Mass> masses) {
  if (masses.empty()) throw InvalidInput("make_dist: masses must be non-empty");
  Mass total(0);
  for (const Mass& m : masses) {
    if (!(m >= Mass(0))) throw InvalidInput("make_dist: negative mass");
    total += m;
  }
  if (!(total > Mass(0))) throw InvalidInput("make_dist: all masses are zero");
  std::vector<Mass> out(masses.begin(), masses.end());
  for (Mass& m : out) m /= total;
  return BasicDist<Mass>(offset, std::move(out));
}

inline DiscreteDist make_dist(Index offset, std::initializer_list<double> masses) {
  return make_dist<double>(offset, std::span<const double>(masses.begin(), masses.size()));
}

DiscreteDist family_binomial(int n, double p);
/// Truncated at the smallest K with P[X > K] <= tail_budget, or at min_last if larger.
DiscreteDist family_poisson(double lambda, double tail_budget = kDefaultTailBudget, Index min_last = 0);
/// Geometric on {0, 1, ...} with g[k] = (1 - theta)^k theta, truncated as above.
DiscreteDist family_geometric(double theta, double tail_budget = kDefaultTailBudget, Index min_last = 0);
DiscreteDist family_bernoulli(double p);

ExactDist binomial_exact(int n, const Rational& p);
ExactDist bernoulli_exact(const Rational& p);

/// Total variation as an interval absorbing truncation error.
///
/// t = sum_k (nu_k - mu_k)_+ over the union window. The true distance lies in
/// [t - mu.tail, t + nu.tail]; the reported interval is
/// [max(0, t - mu.tail), t + mu.tail + nu.tail].
TvInterval tv_distance(const DiscreteDist& mu, const DiscreteDist& nu);
Interval<Rational> tv_distance(const ExactDist& mu, const ExactDist& nu);

DiscreteDist convolve(const DiscreteDist& x, const DiscreteDist& y);
ExactDist convolve(const ExactDist& x, const ExactDist& y);

namespace detail {

/// Checks a_k^2 * lhs_k >= a_{k-1} a_{k+1} * rhs_k for interior k of the support
/// of `a`, where weight(k) returns {lhs_k, rhs_k}. The support must be an
/// interval. Float masses are compared in long double with relative slack;
/// rationals exactly.
template <class Mass, class Weight>
LogConcavityCertificate weighted_log_concavity(const BasicDist<Mass>& a, Weight weight, double slack) {
  LogConcavityCertificate cert;
  const auto s = a.support();
  if (!s) return cert;
  for (Index k = s->first; k <= s->second; ++k) {
    if (!(a.at(k) > Mass(0))) {
      cert.first_violation = k;
      return cert;
    }
  }
  cert.support_is_interval = true;
  for (Index k = s->first + 1; k < s->second; ++k) {
    const auto [lhs_w, rhs_w] = weight(k);
    if constexpr (std::is_same_v<Mass, double>) {
      const long double mid = static_cast<long double>(a.at(k));
      const long double lhs = mid * mid * static_cast<long double>(lhs_w);
      const long double rhs = static_cast<long double>(a.at(k - 1)) * static_cast<long double>(a.at(k + 1)) *
                              static_cast<long double>(rhs_w);
      if (lhs + static_cast<long double>(slack) * std::max(lhs, rhs) < rhs) {
        cert.first_violation = k;
        return cert;
      }
    } else {
      const Mass lhs = a.at(k) * a.at(k) * Mass(lhs_w);
      const Mass rhs = a.at(k - 1) * a.at(k + 1) * Mass(rhs_w);
      if (lhs < rhs) {
        cert.first_violation = k;
        return cert;
      }
    }
  }
  cert.holds = true;
  return cert;
}

}  // namespace detail

/// Is nu log-concave relative to mu? Checks that the support of nu is an
/// interval and q_{k-1} q_{k+1} p_k^2 <= q_k^2 p_{k-1} p_{k+1} at interior k.
/// Throws AbsoluteContinuityError when nu_k > 0 but mu_k = 0.
template <class Mass>
LogConcavityCertificate is_log_concave_relative(const BasicDist<Mass>& nu, const BasicDist<Mass>& mu,
                                                double slack = kCertificateSlack) {
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const Index k = nu.offset() + static_cast<Index>(i);
    if (nu.masses()[i] > Mass(0) && !(mu.at(k) > Mass(0))) {
      throw AbsoluteContinuityError("nu charges index " + std::to_string(k) + " where mu has no mass", k);
    }
  }
  return detail::weighted_log_concavity(
      nu, [&](Index k) { return std::pair<Mass, Mass>{mu.at(k - 1) * mu.at(k + 1), mu.at(k) * mu.at(k)}; }, slack);
}

/// Log-concavity relative to the counting measure on the support hull.
template <class Mass>
LogConcavityCertificate is_log_concave(const BasicDist<Mass>& nu, double slack = kCertificateSlack) {
  return detail::weighted_log_concavity(nu, [](Index) { return std::pair<int, int>{1, 1}; }, slack);
}

/// ULC(m): a_k / C(m, k) log-concave with interval support, a indexed from 0.
/// Uses the ratio form a_k^2 k (m - k) >= a_{k-1} a_{k+1} (k + 1)(m - k + 1).
template <class Mass>
LogConcavityCertificate is_ulc(std::span<const Mass> a, int m, double slack = kCertificateSlack) {
  if (m < 0) throw InvalidInput("is_ulc: order must be non-negative");
  if (a.size() > static_cast<std::size_t>(m) + 1) throw InvalidInput("is_ulc: sequence longer than m + 1");
  if (a.empty()) throw InvalidInput("is_ulc: empty sequence");
  BasicDist<Mass> seq(0, std::vector<Mass>(a.begin(), a.end()));
  return detail::weighted_log_concavity(
      seq,
      [m](Index k) {
        return std::pair<long long, long long>{k * (m - k), (k + 1) * (m - k + 1)};
      },
      slack);
}

/// ULC(infinity): k a_k^2 >= (k + 1) a_{k-1} a_{k+1}, i.e. a_k k! log-concave.
template <class Mass>
LogConcavityCertificate is_ulc_infinity(std::span<const Mass> a, double slack = kCertificateSlack) {
  if (a.empty()) throw InvalidInput("is_ulc_infinity: empty sequence");
  BasicDist<Mass> seq(0, std::vector<Mass>(a.begin(), a.end()));
  return detail::weighted_log_concavity(
      seq, [](Index k) { return std::pair<long long, long long>{k, k + 1}; }, slack);
}

}  // namespace rlc
