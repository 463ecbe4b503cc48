#pragma once

// Continuous laws on the real line: exponential approximation in Kolmogorov
// distance, total-variation bounds from score matching, and Gamma-Gamma bounds
// with quadrature oracles.

#include "rlc/relbound.hpp"

#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rlc {

/// Gamma law with shape kappa and rate lambda: lambda^kappa x^(kappa-1) e^(-lambda x) / Gamma(kappa).
struct GammaParams {
  double kappa = 1.0;
  double lambda = 1.0;

  void validate() const;
  friend bool operator==(const GammaParams&, const GammaParams&) = default;
};

/// Lebesgue density with its derivative on [lower, upper].
struct DensityModel {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  /// log f; defaults to std::log(f(x)) when empty.
  std::function<double(double)> log_f;
  /// d/dx log f; defaults to df/f when empty.
  std::function<double(double)> dlog_f;
  /// Optional distribution function.
  std::function<double(double)> cdf;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  /// Point beyond which the remaining mass is below 1e-14 (finite).
  double tail_cut = 0.0;
  /// Log-concavity of f: verified analytically for the parametric families,
  /// asserted by the caller otherwise.
  bool log_concave = false;

  double log_density(double x) const { return log_f ? log_f(x) : std::log(f(x)); }
  double score(double x) const { return dlog_f ? dlog_f(x) : df(x) / f(x); }

  /// Spot checks: f >= 0 on a grid and, when a CDF is present, monotonicity
  /// with limits 0 and 1. Throws InvalidInput on failure.
  void validate() const;
};

/// Regularized lower incomplete gamma P(kappa, lambda x). Throws for x < 0.
double gamma_cdf(const GammaParams& g, double x);

DensityModel gamma_density(const GammaParams& g);
DensityModel exponential_density(double rate);
/// "exponential" (e^-x), "exp-quadratic" (c e^(-x - x^2/2)) and
/// "exp-cubic" (c e^(-x - x^3/3)) on [0, inf), normalized by quadrature.
DensityModel builtin_density(std::string_view name);
std::vector<std::string> builtin_density_names();

/// Integral of f over [a, b] by adaptive Gauss-Kronrod (b may be infinite).
double integrate_density(const DensityModel& d, double a, double b);

/// Second differences of log f on a grid over [lower, tail_cut]; true when no
/// convexity is seen. A spot check, not a proof.
bool spot_check_log_concavity(const DensityModel& d, int points = 400);

/// sup_x |F(x) - (1 - e^(-rate x))| over [0, inf): grid scan over [0, tail_cut]
/// refined at each local extremum by root finding on f(x) - rate e^(-rate x).
TvInterval kolmogorov_to_exponential(const DensityModel& d, double rate);

/// Exponential approximation on [0, inf) with rate r = -f'(0)/f(0); bound
/// f(0)/r - 1 in Kolmogorov distance. Throws NotApplicable unless the domain
/// starts at 0, f(0) > 0 is finite, f'(0) < 0 is finite and log-concavity is
/// attested.
BoundReport exp_kolmogorov_bound(const DensityModel& d);

struct ContinuousBounds {
  /// int ((f_nu(z)/f_mu(z)) e^((x-z) delta) - 1)_+ mu(dx)
  double mu_side = 0.0;
  /// int (1 - (f_mu(z)/f_nu(z)) e^(-(x-z) delta))_+ nu(dx)
  double nu_side = 0.0;
  /// Score gap f_nu'(z)/f_nu(z) - f_mu'(z)/f_mu(z).
  double delta = 0.0;
  double ratio = 1.0;
};

/// Both integrals at z, split at the single sign change x* = z - log(ratio)/delta.
/// Values are raw (they may exceed 1 or be infinite). Throws NotApplicable on
/// a zero or non-finite density at z.
ContinuousBounds tv_bound_continuous(const DensityModel& fmu, const DensityModel& fnu, double z);

/// min(f_nu(z)/f_mu(z) - 1, 1 - f_mu(z)/f_nu(z)) when the scores match at z
/// (|delta| <= 1e-10 max(1, |scores|)). Throws NotApplicable on a score
/// mismatch or when f_nu(z) < f_mu(z).
double tv_bound_matched(const DensityModel& fmu, const DensityModel& fnu, double z);

/// Points where the two Gamma densities cross (at most two), ascending.
std::vector<double> gamma_crossings(const GammaParams& a, const GammaParams& b);

/// TV between two Gamma laws by differencing CDFs between the crossings.
TvInterval tv_gamma_quadrature(const GammaParams& a, const GammaParams& b);

/// Case (kappa1 - kappa2)/(lambda1 - lambda2) > 0: the scores match at that z.
/// When kappa1 < kappa2 the roles are swapped so the first law is log-concave
/// relative to the second. Closed forms: "matched" (the exact density ratio,
/// asserted) and "without_gamma_ratio" (the ratio without Gamma(kappa2)/Gamma(kappa1),
/// not asserted).
BoundReport gamma_bound_case_i(const GammaParams& a, const GammaParams& b);

/// |(z/e)^(k1-k2) - 1| + (z/e)^(k1-k2) (1 + k1 + k2) 2^(k1+1) |(k1-k2)/(l2 z) + (l2-l1)/l2|^(1/2).
/// Throws NotApplicable unless z > 0 and (k1 - k2)/z + l2 - l1 <= l2/4.
double gamma_case_ii_formula(const GammaParams& a, const GammaParams& b, double z);
/// (1 + 2 kappa) 2^(kappa+1) |(l2 - l1)/l2|^(1/2), requires 4 (l2 - l1) <= l2.
double gamma_equal_shape_formula(double kappa, double lambda1, double lambda2);
/// |(e l/4)^(k2-k1) - 1| + (e l/4)^(k2-k1) (1 + k1 + k2) 2^(k1+1) |k1 - k2|^(1/2),
/// requires k1 - k2 <= 1.
double gamma_equal_rate_formula(double kappa1, double kappa2, double lambda);

/// Report for case (ii) at a given z: the formula and any applicable
/// specialization (not asserted), the integral bounds at z (asserted when
/// kappa1 >= kappa2) and the quadrature TV.
BoundReport gamma_bound_case_ii(const GammaParams& a, const GammaParams& b, double z);

}  // namespace rlc
