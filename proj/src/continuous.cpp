#include "rlc/continuous.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rlc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadratureTolerance = 1e-13;
constexpr double kOracleSlack = 1e-10;

// Adaptive Gauss-Kronrod; tanh-sinh on finite pieces whose integrand is not
// finite at the left endpoint (Gamma shapes below 1).
template <class F>
double gauss_kronrod(F f, double a, double b) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  if (std::isfinite(b) && !std::isfinite(f(a))) {
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b, kQuadratureTolerance, &err);
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (!std::isfinite(b)) return GK::integrate(f, a, b, 15, kQuadratureTolerance, &err);
  // Boost compares an unscaled error estimate with a tolerance scaled by the
  // half-width, so narrow intervals are mapped onto [-1, 1] first.
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto g = [&](double u) { return f(mid + half * u); };
  // Subnormal integrands never meet a relative tolerance; their mass is negligible.
  double l1 = 0.0;
  const double rough = GK::integrate(g, -1.0, 1.0, 0, kQuadratureTolerance, &err, &l1);
  if (l1 < 1e-250) return half * rough;
  return half * GK::integrate(g, -1.0, 1.0, 15, kQuadratureTolerance, &err);
}

// Root of a monotone g on [lo, hi] with g(lo), g(hi) of opposite signs.
template <class G>
double bracketed_root(G g, double lo, double hi) {
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

double sign(double v) { return (v > 0) - (v < 0); }

// First x = start * 2^k (k >= 0) with log f(x) < -40, refined to a finite cut.
double find_tail_cut(const std::function<double(double)>& log_f, double start) {
  double x = start;
  for (int i = 0; i < 200 && log_f(x) > -40.0; ++i) x *= 2.0;
  return x;
}

double clamp01(double v) { return std::isnan(v) ? 1.0 : std::clamp(v, 0.0, 1.0); }

std::string describe(const GammaParams& g) {
  std::ostringstream os;
  os << "gamma(" << g.kappa << ", " << g.lambda << ")";
  return os.str();
}

}  // namespace

void GammaParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidInput("gamma: shape must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("gamma: rate must be positive");
}

void DensityModel::validate() const {
  if (!f || !df) throw InvalidInput("density: f and f' are required");
  if (!(upper > lower)) throw InvalidInput("density: empty domain");
  const double hi = std::isfinite(upper) ? upper : tail_cut;
  double prev = -kInf;
  for (int i = 1; i < 200; ++i) {
    const double x = lower + (hi - lower) * i / 200.0;
    if (!(f(x) >= 0.0)) throw InvalidInput("density: negative value at x = " + std::to_string(x));
    if (cdf) {
      const double c = cdf(x);
      if (!(c >= prev - 1e-12) || c < -1e-12 || c > 1.0 + 1e-12) {
        throw InvalidInput("density: distribution function is not monotone in [0, 1]");
      }
      prev = c;
    }
  }
  if (cdf && std::fabs(cdf(hi) - 1.0) > 1e-9) throw InvalidInput("density: distribution function does not reach 1");
}

double gamma_cdf(const GammaParams& g, double x) {
  g.validate();
  if (!(x >= 0.0)) throw InvalidInput("gamma_cdf: x must be non-negative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(g.kappa, g.lambda * x);
}

DensityModel gamma_density(const GammaParams& g) {
  g.validate();
  const double k = g.kappa;
  const double l = g.lambda;
  const double log_c = k * std::log(l) - std::lgamma(k);
  DensityModel d;
  d.name = describe(g);
  d.log_f = [=](double x) {
    if (x < 0.0) return -kInf;
    if (x == 0.0) return k == 1.0 ? log_c : (k > 1.0 ? -kInf : kInf);
    return log_c + (k - 1.0) * std::log(x) - l * x;
  };
  d.f = [log_f = d.log_f](double x) { return std::exp(log_f(x)); };
  d.df = [=, f = d.f](double x) {
    if (x < 0.0) return 0.0;
    if (k == 1.0) return -l * f(x);
    // c e^(-l x) ((k - 1) x^(k-2) - l x^(k-1))
    return std::exp(log_c - l * x) * ((k - 1.0) * std::pow(x, k - 2.0) - l * std::pow(x, k - 1.0));
  };
  d.dlog_f = [=](double x) { return (k - 1.0) / x - l; };
  d.cdf = [g](double x) { return x <= 0.0 ? 0.0 : gamma_cdf(g, x); };
  d.lower = 0.0;
  d.tail_cut = boost::math::gamma_q_inv(k, 1e-15) / l;
  d.log_concave = k >= 1.0;
  return d;
}

DensityModel exponential_density(double rate) {
  DensityModel d = gamma_density({1.0, rate});
  std::ostringstream os;
  os << "exponential(" << rate << ")";
  d.name = os.str();
  d.cdf = [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); };
  return d;
}

std::vector<std::string> builtin_density_names() { return {"exponential", "exp-quadratic", "exp-cubic"}; }

DensityModel builtin_density(std::string_view name) {
  if (name == "exponential") {
    DensityModel d = exponential_density(1.0);
    d.name = "exponential";
    return d;
  }
  std::function<double(double)> g;    // unnormalized log-density
  std::function<double(double)> dg;   // its derivative
  if (name == "exp-quadratic") {
    g = [](double x) { return -x - 0.5 * x * x; };
    dg = [](double x) { return -1.0 - x; };
  } else if (name == "exp-cubic") {
    g = [](double x) { return -x - x * x * x / 3.0; };
    dg = [](double x) { return -1.0 - x * x; };
  } else {
    throw InvalidInput("unknown builtin density: " + std::string(name));
  }
  const double cut = find_tail_cut(g, 1.0);
  const double mass = gauss_kronrod([&](double x) { return std::exp(g(x)); }, 0.0, cut) +
                      gauss_kronrod([&](double x) { return std::exp(g(x)); }, cut, kInf);
  const double log_c = -std::log(mass);
  DensityModel d;
  d.name = std::string(name);
  d.log_f = [=](double x) { return x < 0.0 ? -kInf : log_c + g(x); };
  d.f = [log_f = d.log_f](double x) { return std::exp(log_f(x)); };
  d.df = [=, f = d.f](double x) { return x < 0.0 ? 0.0 : f(x) * dg(x); };
  d.dlog_f = dg;
  d.lower = 0.0;
  d.tail_cut = find_tail_cut(d.log_f, 1.0);
  d.log_concave = true;
  return d;
}

double integrate_density(const DensityModel& d, double a, double b) {
  a = std::max(a, d.lower);
  b = std::min(b, d.upper);
  if (!(b > a)) return 0.0;
  if (std::isinf(b) && d.tail_cut > a) return gauss_kronrod(d.f, a, d.tail_cut) + gauss_kronrod(d.f, d.tail_cut, b);
  return gauss_kronrod(d.f, a, b);
}

bool spot_check_log_concavity(const DensityModel& d, int points) {
  const double hi = std::isfinite(d.upper) ? d.upper : d.tail_cut;
  const double h = (hi - d.lower) / points;
  for (int i = 1; i + 1 < points; ++i) {
    const double x = d.lower + i * h;
    const double a = d.log_density(x - h), b = d.log_density(x), c = d.log_density(x + h);
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
    if (a + c - 2.0 * b > 1e-9 * (std::fabs(a) + std::fabs(b) + std::fabs(c) + 1.0)) return false;
  }
  return true;
}

TvInterval kolmogorov_to_exponential(const DensityModel& d, double rate) {
  const double hi = std::max(d.tail_cut, 40.0 / rate);
  constexpr int kGrid = 2000;
  auto expo = [rate](double x) { return -std::expm1(-rate * x); };
  auto gap_derivative = [&](double x) { return d.f(x) - rate * std::exp(-rate * x); };

  std::vector<double> xs(kGrid + 1), cdf(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) xs[i] = hi * i / kGrid;
  cdf[0] = 0.0;
  if (d.cdf) {
    for (int i = 1; i <= kGrid; ++i) cdf[i] = d.cdf(xs[i]);
  } else {
    CompensatedSum acc;
    for (int i = 1; i <= kGrid; ++i) {
      acc.add(gauss_kronrod(d.f, xs[i - 1], xs[i]));
      cdf[i] = acc.value();
    }
  }
  double best = 0.0;
  for (int i = 0; i <= kGrid; ++i) best = std::max(best, std::fabs(cdf[i] - expo(xs[i])));
  for (int i = 1; i <= kGrid; ++i) {
    const double a = gap_derivative(xs[i - 1]);
    const double b = gap_derivative(xs[i]);
    if (!(std::isfinite(a) && std::isfinite(b)) || sign(a) * sign(b) >= 0) continue;
    const double x = bracketed_root(gap_derivative, xs[i - 1], xs[i]);
    const double fx = d.cdf ? d.cdf(x) : cdf[i - 1] + gauss_kronrod(d.f, xs[i - 1], x);
    best = std::max(best, std::fabs(fx - expo(x)));
  }
  // Beyond the grid both distribution functions are within 1e-14 of 1.
  return {std::max(0.0, best - kOracleSlack), best + kOracleSlack};
}

BoundReport exp_kolmogorov_bound(const DensityModel& d) {
  if (d.lower != 0.0 || std::isfinite(d.upper)) throw NotApplicable("exponential approximation needs the domain [0, inf)");
  const double f0 = d.f(0.0);
  const double df0 = d.df(0.0);
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw NotApplicable("exponential approximation needs 0 < f(0) < inf");
  if (!(df0 < 0.0) || !std::isfinite(df0)) throw NotApplicable("exponential approximation needs -inf < f'(0) < 0");
  if (!d.log_concave) throw NotApplicable("density is not attested log-concave");

  BoundReport report;
  report.kind = "expapprox";
  report.metric = "kolmogorov";
  report.hypothesis.holds = report.hypothesis.support_is_interval = true;
  if (!spot_check_log_concavity(d)) report.notes.push_back("grid spot check of log-concavity failed");
  const double rate = -df0 / f0;
  const double bound = f0 / rate - 1.0;
  report.set_parameter("rate", rate);
  report.set_parameter("f0", f0);
  report.simplified = clamp01(bound);
  report.closed_forms.push_back(named_bound("kolmogorov", bound));
  report.attach_oracle(kolmogorov_to_exponential(d, rate));
  return report;
}

ContinuousBounds tv_bound_continuous(const DensityModel& fmu, const DensityModel& fnu, double z) {
  const double lm = fmu.log_density(z), ln = fnu.log_density(z);
  if (!(std::isfinite(lm) && std::isfinite(ln))) throw NotApplicable("both densities must be positive and finite at z");
  ContinuousBounds out;
  const double log_a = ln - lm;
  out.ratio = std::exp(log_a);
  out.delta = fnu.score(z) - fmu.score(z);
  const double delta = out.delta;
  if (!std::isfinite(delta)) throw NotApplicable("score is not finite at z");

  // Region where (f_nu(z)/f_mu(z)) e^((x-z) delta) > 1.
  double from = -kInf, to = kInf;
  if (delta > 0.0) {
    from = z - log_a / delta;
  } else if (delta < 0.0) {
    to = z - log_a / delta;
  } else if (!(log_a > 0.0)) {
    return out;
  }

  auto side = [&](const DensityModel& d, auto integrand) {
    const double a = std::max(from, d.lower);
    const double b = std::min(to, d.upper);
    if (!(b > a)) return 0.0;
    const double cut = std::max(d.tail_cut, a);
    // A growing integrand past the cut means the integral diverges.
    if (std::isinf(b) && delta > 0.0 && integrand(2.0 * cut + 1.0) > integrand(cut + 1.0)) return kInf;
    const double v = b > cut ? gauss_kronrod(integrand, a, cut) + gauss_kronrod(integrand, cut, b)
                             : gauss_kronrod(integrand, a, b);
    return std::max(0.0, v);
  };
  out.mu_side = side(fmu, [&](double x) {
    const double lf = fmu.log_density(x);
    return std::exp(log_a + (x - z) * delta + lf) - std::exp(lf);
  });
  out.nu_side = side(fnu, [&](double x) {
    const double lf = fnu.log_density(x);
    return std::exp(lf) - std::exp(-log_a - (x - z) * delta + lf);
  });
  return out;
}

double tv_bound_matched(const DensityModel& fmu, const DensityModel& fnu, double z) {
  const double smu = fmu.score(z), snu = fnu.score(z);
  const double scale = std::max({1.0, std::fabs(smu), std::fabs(snu)});
  if (!(std::fabs(snu - smu) <= 1e-10 * scale)) throw NotApplicable("scores do not match at z");
  const double log_a = fnu.log_density(z) - fmu.log_density(z);
  if (!std::isfinite(log_a)) throw NotApplicable("both densities must be positive and finite at z");
  if (log_a < -1e-12) throw NotApplicable("f_nu(z) < f_mu(z) at a matched point contradicts relative log-concavity");
  return std::max(0.0, std::min(std::expm1(log_a), -std::expm1(-log_a)));
}

std::vector<double> gamma_crossings(const GammaParams& a, const GammaParams& b) {
  a.validate();
  b.validate();
  const double dk = a.kappa - b.kappa;
  const double dl = a.lambda - b.lambda;
  const double c = a.kappa * std::log(a.lambda) - b.kappa * std::log(b.lambda) - std::lgamma(a.kappa) +
                   std::lgamma(b.kappa);
  auto h = [=](double x) { return dk * std::log(x) - dl * x + c; };
  if (dk == 0.0) {
    if (dl == 0.0) return {};
    const double x = c / dl;
    return x > 0.0 ? std::vector<double>{x} : std::vector<double>{};
  }
  std::vector<double> pieces{0.0};
  if (dl != 0.0 && dk / dl > 0.0) pieces.push_back(dk / dl);
  pieces.push_back(kInf);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const double anchor = std::isfinite(pieces[i + 1]) ? pieces[i + 1] : std::max(1.0, pieces[i]);
    double lo = pieces[i] > 0.0 ? pieces[i] : anchor;
    double hi = std::isfinite(pieces[i + 1]) ? pieces[i + 1] : anchor;
    if (pieces[i] == 0.0) {
      // h -> -dk * inf as x -> 0
      for (int k = 0; k < 1100 && sign(h(lo)) != -sign(dk); ++k) lo *= 0.5;
      if (lo == hi) lo *= 0.5;
    }
    if (std::isinf(pieces[i + 1])) {
      const double limit = dl != 0.0 ? -sign(dl) : sign(dk);
      for (int k = 0; k < 1100 && sign(h(hi)) != limit; ++k) hi *= 2.0;
      if (lo == hi) hi *= 2.0;
    }
    const double hl = h(lo), hh = h(hi);
    if (hl == 0.0) {
      roots.push_back(lo);
    } else if (sign(hl) * sign(hh) < 0) {
      roots.push_back(bracketed_root(h, lo, hi));
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

TvInterval tv_gamma_quadrature(const GammaParams& a, const GammaParams& b) {
  if (a == b) return {0.0, 0.0};
  const auto roots = gamma_crossings(a, b);
  std::vector<double> cuts{0.0};
  cuts.insert(cuts.end(), roots.begin(), roots.end());
  cuts.push_back(kInf);
  const double c = a.kappa * std::log(a.lambda) - b.kappa * std::log(b.lambda) - std::lgamma(a.kappa) +
                   std::lgamma(b.kappa);
  auto h = [&](double x) { return (a.kappa - b.kappa) * std::log(x) - (a.lambda - b.lambda) * x + c; };
  CompensatedSum tv;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double mid = std::isinf(hi) ? (lo > 0.0 ? 2.0 * lo : 1.0) : (lo == 0.0 ? 0.5 * hi : 0.5 * (lo + hi));
    if (!(h(mid) > 0.0)) continue;
    tv.add((gamma_cdf(a, hi) - gamma_cdf(a, lo)) - (gamma_cdf(b, hi) - gamma_cdf(b, lo)));
  }
  const double v = std::max(0.0, tv.value());
  return {std::max(0.0, v - 1e-12), v + 1e-12};
}

BoundReport gamma_bound_case_i(const GammaParams& a_in, const GammaParams& b_in) {
  a_in.validate();
  b_in.validate();
  BoundReport report;
  report.kind = "gamma-i";
  report.set_parameter("kappa1", a_in.kappa);
  report.set_parameter("lambda1", a_in.lambda);
  report.set_parameter("kappa2", b_in.kappa);
  report.set_parameter("lambda2", b_in.lambda);
  const double dk0 = a_in.kappa - b_in.kappa;
  const double dl0 = a_in.lambda - b_in.lambda;
  if (dk0 == 0.0 || dl0 == 0.0 || !(dk0 / dl0 > 0.0)) {
    report.not_applicable = "requires (kappa1 - kappa2) / (lambda1 - lambda2) > 0";
    report.attach_oracle(tv_gamma_quadrature(a_in, b_in));
    return report;
  }
  const bool swapped = dk0 < 0.0;
  const GammaParams& nu = swapped ? b_in : a_in;
  const GammaParams& mu = swapped ? a_in : b_in;
  if (swapped) report.notes.push_back("kappa1 < kappa2: roles swapped so the first law is log-concave relative to the second");
  report.set_parameter("swapped", swapped ? 1.0 : 0.0);

  const double dk = nu.kappa - mu.kappa;
  const double z = dk / (nu.lambda - mu.lambda);
  report.set_parameter("z", z);
  report.hypothesis.holds = report.hypothesis.support_is_interval = true;

  const double log_unnormalized = nu.kappa * std::log(nu.lambda) - mu.kappa * std::log(mu.lambda) + dk * (std::log(z) - 1.0);
  const double log_ratio = log_unnormalized - std::lgamma(nu.kappa) + std::lgamma(mu.kappa);
  report.set_parameter("density_ratio", std::exp(log_ratio));
  auto pair_min = [](double l) { return std::min(std::expm1(l), -std::expm1(-l)); };

  try {
    const auto integrals = tv_bound_continuous(gamma_density(mu), gamma_density(nu), z);
    report.bound_mu_side = clamp01(integrals.mu_side);
    report.bound_nu_side = clamp01(integrals.nu_side);
  } catch (const NotApplicable& e) {
    report.notes.push_back(std::string("integral bounds not evaluated: ") + e.what());
  }
  report.simplified = clamp01(pair_min(log_ratio));
  report.closed_forms.push_back(named_bound("matched", pair_min(log_ratio)));
  report.closed_forms.push_back(named_bound("without_gamma_ratio", pair_min(log_unnormalized), false));
  report.attach_oracle(tv_gamma_quadrature(nu, mu));
  return report;
}

double gamma_case_ii_formula(const GammaParams& a, const GammaParams& b, double z) {
  a.validate();
  b.validate();
  if (!(z > 0.0) || !std::isfinite(z)) throw NotApplicable("case (ii) needs z > 0");
  const double dk = a.kappa - b.kappa;
  const double tilt = dk / z + b.lambda - a.lambda;
  if (!(tilt <= b.lambda / 4.0)) throw NotApplicable("case (ii) needs (kappa1 - kappa2)/z + lambda2 - lambda1 <= lambda2/4");
  const double w = std::pow(z / std::exp(1.0), dk);
  return std::fabs(w - 1.0) +
         w * (1.0 + a.kappa + b.kappa) * std::pow(2.0, a.kappa + 1.0) * std::sqrt(std::fabs(tilt / b.lambda));
}

double gamma_equal_shape_formula(double kappa, double lambda1, double lambda2) {
  GammaParams{kappa, lambda1}.validate();
  GammaParams{kappa, lambda2}.validate();
  if (!(4.0 * (lambda2 - lambda1) <= lambda2)) throw NotApplicable("equal shapes needs 4 (lambda2 - lambda1) <= lambda2");
  return (1.0 + 2.0 * kappa) * std::pow(2.0, kappa + 1.0) * std::sqrt(std::fabs((lambda2 - lambda1) / lambda2));
}

double gamma_equal_rate_formula(double kappa1, double kappa2, double lambda) {
  GammaParams{kappa1, lambda}.validate();
  GammaParams{kappa2, lambda}.validate();
  if (!(kappa1 - kappa2 <= 1.0)) throw NotApplicable("equal rates needs kappa1 - kappa2 <= 1");
  const double w = std::pow(std::exp(1.0) * lambda / 4.0, kappa2 - kappa1);
  return std::fabs(w - 1.0) +
         w * (1.0 + kappa1 + kappa2) * std::pow(2.0, kappa1 + 1.0) * std::sqrt(std::fabs(kappa1 - kappa2));
}

BoundReport gamma_bound_case_ii(const GammaParams& a, const GammaParams& b, double z) {
  a.validate();
  b.validate();
  BoundReport report;
  report.kind = "gamma-ii";
  report.set_parameter("kappa1", a.kappa);
  report.set_parameter("lambda1", a.lambda);
  report.set_parameter("kappa2", b.kappa);
  report.set_parameter("lambda2", b.lambda);
  report.set_parameter("z", z);
  report.attach_oracle(tv_gamma_quadrature(a, b));
  try {
    report.closed_forms.push_back(named_bound("general", gamma_case_ii_formula(a, b, z), false));
  } catch (const NotApplicable& e) {
    report.not_applicable = e.what();
    return report;
  }
  if (a.kappa == b.kappa && 4.0 * (b.lambda - a.lambda) <= b.lambda) {
    report.closed_forms.push_back(
        named_bound("equal_shapes", gamma_equal_shape_formula(a.kappa, a.lambda, b.lambda), false));
  }
  if (a.lambda == b.lambda && a.kappa - b.kappa <= 1.0) {
    report.closed_forms.push_back(
        named_bound("equal_rates", gamma_equal_rate_formula(a.kappa, b.kappa, a.lambda), false));
  }
  const bool concave = a.kappa >= b.kappa;
  report.hypothesis.holds = concave;
  report.hypothesis.support_is_interval = true;
  ContinuousBounds integrals;
  try {
    integrals = tv_bound_continuous(gamma_density(b), gamma_density(a), z);
  } catch (const NotApplicable& e) {
    report.not_applicable = e.what();
    return report;
  }
  if (concave) {
    report.bound_mu_side = clamp01(integrals.mu_side);
    report.bound_nu_side = clamp01(integrals.nu_side);
  } else {
    report.not_applicable = "kappa1 < kappa2: the first law is not log-concave relative to the second";
    report.closed_forms.push_back(named_bound("integral_mu_side", integrals.mu_side, false));
    report.closed_forms.push_back(named_bound("integral_nu_side", integrals.nu_side, false));
  }
  report.attach_oracle(*report.oracle_tv);
  return report;
}

}  // namespace rlc
