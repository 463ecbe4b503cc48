#pragma once

// Sums of independent integer variables: Poisson-binomial laws and their
// binomial, Poisson and geometric approximations.

#include "rlc/relbound.hpp"

#include <span>
#include <vector>

namespace rlc {

/// Success probabilities p_i in [0, 1); alpha_i = 1 - p_i > 0.
class BernoulliVector {
 public:
  explicit BernoulliVector(std::vector<double> p);

  std::size_t size() const noexcept { return p_.size(); }
  std::span<const double> p() const noexcept { return p_; }
  double alpha(std::size_t i) const { return 1.0 - p_[i]; }
  /// p_i / alpha_i
  double odds(std::size_t i) const { return p_[i] / (1.0 - p_[i]); }
  bool all_equal() const;

 private:
  std::vector<double> p_;
};

/// m: mean of 1/alpha_i; g: geometric mean of 1/alpha_i; r: mean of p_i/alpha_i
/// (equal to m - 1); lambda = n (m - 1).
struct MeanSummary {
  std::size_t n = 0;
  double m = 1.0;
  double g = 1.0;
  double r = 0.0;
  double lambda = 0.0;
};

MeanSummary summarize(const BernoulliVector& bv);

/// PMF on {0..n} by iterated two-term convolution in double-double arithmetic.
DiscreteDist poisson_binomial_pmf(const BernoulliVector& bv);
ExactDist poisson_binomial_pmf_exact(std::span<const Rational> p);

/// Binomial(n, 1 - 1/m), whose first ratio matches the Poisson-binomial law.
DiscreteDist binomial_target(const BernoulliVector& bv);
ExactDist binomial_target_exact(std::span<const Rational> p);

/// min((m/g)^n - 1, 1 - (g/m)^n), evaluated in log space.
double binomial_bound_primary(const BernoulliVector& bv);
/// The same quantity exactly: (m/g)^n = m^n prod alpha_i is rational.
Rational binomial_bound_primary_exact(std::span<const Rational> p);

/// exp{sum (x_i - r)^2 + sum x_i^3 / (3 n^2)} - 1 with x_i = p_i/alpha_i.
/// With proof_tight the exponent is (1/2) sum (x_i - r)^2 + (sum x_i)^3 / (3 n^2).
double binomial_bound_secondary(const BernoulliVector& bv, bool proof_tight = false);

/// Poisson(n (m - 1)); the window covers at least {0..n}.
DiscreteDist poisson_target(const BernoulliVector& bv, double tail_budget = kDefaultTailBudget);
/// exp{sum (p_i/alpha_i)^2} - 1
double poisson_bound(const BernoulliVector& bv);

struct SumsOptions {
  double tail_budget = kDefaultTailBudget;
  bool proof_tight = false;
  CertifyOptions certify;
};

/// Full reports: anchored bounds at the matched anchor 0, the closed forms,
/// the summary parameters and the oracle TV.
BoundReport binomial_report(const BernoulliVector& bv, const SumsOptions& opts = {});
BoundReport poisson_report(const BernoulliVector& bv, const SumsOptions& opts = {});

/// Geometric approximation of xi_1 + ... + xi_n for log-concave xi_i on the
/// non-negative integers with alpha_i = P[xi_i = 0] > 0. Requires
/// lambda = n (m - 1) < 1; target Geometric(1 - lambda); closed form
/// lambda / (1 - lambda). The closed form is asserted only when every xi_i is
/// Bernoulli (then the anchor at 0 is ratio-matched).
BoundReport geometric_sum_bound(std::span<const DiscreteDist> xis, const SumsOptions& opts = {});

}  // namespace rlc
