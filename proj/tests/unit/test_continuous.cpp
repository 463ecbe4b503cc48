#include "rlc/continuous.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rlc;

namespace {

double gamma_pdf(double k, double l, double x) {
  return std::exp(k * std::log(l) + (k - 1) * std::log(x) - l * x - std::lgamma(k));
}

double erlang_cdf(int k, double l, double x) {
  double term = 1.0, sum = 0.0;
  for (int j = 0; j < k; ++j) {
    sum += term;
    term *= l * x / (j + 1);
  }
  return 1.0 - std::exp(-l * x) * sum;
}

// Composite Simpson for half the L1 distance of two Gamma densities with shapes >= 1
// (loose: the integrand has kinks at the crossings).
double simpson_tv(GammaParams a, GammaParams b, double hi, int n = 200000) {
  const double h = hi / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    const double d = x == 0.0 ? std::fabs((a.kappa == 1 ? a.lambda : 0.0) - (b.kappa == 1 ? b.lambda : 0.0)) : std::fabs(gamma_pdf(a.kappa, a.lambda, x) - gamma_pdf(b.kappa, b.lambda, x));
    s += d * (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2));
  }
  return 0.5 * s * h / 3.0;
}

template <class G>
double bisect(G g, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(lo) * g(mid) <= 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// TV between integer-shape Gamma laws: sign changes of the log ratio located by
// a scan plus bisection, then Erlang CDF differences over the positive pieces.
double erlang_tv(int k1, double l1, int k2, double l2) {
  auto h = [&](double x) { return std::log(gamma_pdf(k1, l1, x)) - std::log(gamma_pdf(k2, l2, x)); };
  std::vector<double> cuts{0.0};
  for (double x = 1e-3; x < 80.0; x += 1e-3) {
    if (h(x) * h(x + 1e-3) < 0) cuts.push_back(bisect(h, x, x + 1e-3));
  }
  cuts.push_back(INFINITY);
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double mid = std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
    if (h(mid) <= 0) continue;
    auto F1 = [&](double x) { return std::isinf(x) ? 1.0 : erlang_cdf(k1, l1, x); };
    auto F2 = [&](double x) { return std::isinf(x) ? 1.0 : erlang_cdf(k2, l2, x); };
    tv += (F1(hi) - F1(lo)) - (F2(hi) - F2(lo));
  }
  return tv;
}

}  // namespace

TEST(GammaCdf, Examples) {
  EXPECT_NEAR(gamma_cdf({1, 2}, 1.0), 1 - std::exp(-2.0), 1e-15);
  EXPECT_NEAR(gamma_cdf({2, 2}, 0.3574), 1 - (1 + 2 * 0.3574) * std::exp(-2 * 0.3574), 1e-15);
  EXPECT_NEAR(gamma_cdf({2, 2}, 0.3574), 0.1609656, 1e-7);
  EXPECT_EQ(gamma_cdf({3.7, 0.4}, 0.0), 0.0);
  EXPECT_THROW(gamma_cdf({1, 1}, -1.0), InvalidInput);
  EXPECT_THROW(gamma_cdf({0, 1}, 1.0), InvalidInput);
}

TEST(GammaCdf, MatchesErlang) {
  for (int k = 1; k <= 5; ++k) {
    for (double l : {0.3, 1.0, 2.5}) {
      for (double x : {0.01, 0.5, 1.0, 3.0, 10.0}) {
        EXPECT_NEAR(gamma_cdf({static_cast<double>(k), l}, x), erlang_cdf(k, l, x), 1e-12) << k << " " << l << " " << x;
      }
    }
  }
}

TEST(DensityModel, GammaDerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> kd(0.3, 6.0), ld(0.2, 4.0);
  for (int t = 0; t < 50; ++t) {
    const auto d = gamma_density({kd(rng), ld(rng)});
    for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const double h = 1e-6 * x;
      const double fd = (d.f(x + h) - d.f(x - h)) / (2 * h);
      EXPECT_NEAR(d.df(x), fd, 1e-6 * std::max(std::fabs(fd), d.f(x)) + 1e-300) << d.name << " at " << x;
    }
  }
}

TEST(DensityModel, Validation) {
  EXPECT_NO_THROW(gamma_density({2.5, 1.5}).validate());
  for (const auto& n : builtin_density_names()) EXPECT_NO_THROW(builtin_density(n).validate()) << n;
  EXPECT_THROW(builtin_density("nope"), InvalidInput);
  auto bad = exponential_density(1.0);
  bad.cdf = [](double x) { return std::sin(x); };
  EXPECT_THROW(bad.validate(), InvalidInput);
  EXPECT_TRUE(gamma_density({1.5, 1}).log_concave);
  EXPECT_FALSE(gamma_density({0.5, 1}).log_concave);
  EXPECT_TRUE(spot_check_log_concavity(builtin_density("exp-cubic")));
  EXPECT_FALSE(spot_check_log_concavity(gamma_density({0.5, 1})));
}

TEST(ExpKolmogorov, ExponentialIsExact) {
  for (double rate : {0.5, 1.0, 3.0}) {
    const auto r = exp_kolmogorov_bound(exponential_density(rate));
    EXPECT_NEAR(r.parameter("rate")->value, rate, 1e-14);
    EXPECT_NEAR(r.closed_form("kolmogorov")->raw, 0.0, 1e-14);
    EXPECT_LE(r.oracle_tv->hi, 1e-9);
    EXPECT_EQ(r.metric, "kolmogorov");
  }
}

TEST(ExpKolmogorov, ExpQuadratic) {
  const double mass = std::exp(0.5) * std::sqrt(M_PI / 2) * std::erfc(1 / std::sqrt(2.0));
  const double c = 1 / mass;
  EXPECT_NEAR(c, 1.5251, 1e-3);
  const auto r = exp_kolmogorov_bound(builtin_density("exp-quadratic"));
  EXPECT_NEAR(r.parameter("f0")->value, c, 1e-12);
  EXPECT_NEAR(r.parameter("rate")->value, 1.0, 1e-12);
  EXPECT_NEAR(r.closed_form("kolmogorov")->raw, c - 1, 1e-12);

  // F(x) = c e^{1/2} sqrt(pi/2) (erf((x+1)/sqrt2) - erf(1/sqrt2)) against 1 - e^{-x}.
  double dk = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double x = i * 1e-4;
    const double F = c * std::exp(0.5) * std::sqrt(M_PI / 2) * (std::erf((x + 1) / std::sqrt(2.0)) - std::erf(1 / std::sqrt(2.0)));
    dk = std::max(dk, std::fabs(F + std::expm1(-x)));
  }
  EXPECT_NEAR(r.oracle_tv->hi, dk, 1e-8);
  EXPECT_NEAR(dk, 0.2256353, 1e-6);
  EXPECT_EQ(r.dominated, std::optional<bool>(true));
}

TEST(ExpKolmogorov, ExpCubicDominated) {
  const auto r = exp_kolmogorov_bound(builtin_density("exp-cubic"));
  EXPECT_NEAR(r.parameter("rate")->value, 1.0, 1e-12);
  EXPECT_EQ(r.dominated, std::optional<bool>(true));
  EXPECT_GT(r.oracle_tv->lo, 0.1);
}

TEST(ExpKolmogorov, Preconditions) {
  EXPECT_THROW(exp_kolmogorov_bound(gamma_density({0.5, 1})), NotApplicable);
  EXPECT_THROW(exp_kolmogorov_bound(gamma_density({2, 1})), NotApplicable);
  auto increasing = builtin_density("exp-quadratic");
  increasing.df = [](double) { return 1.0; };
  EXPECT_THROW(exp_kolmogorov_bound(increasing), NotApplicable);
}

TEST(TvBoundContinuous, IdenticalDensities) {
  const auto d = gamma_density({2.5, 1.5});
  const auto b = tv_bound_continuous(d, d, 1.3);
  EXPECT_EQ(b.mu_side, 0.0);
  EXPECT_EQ(b.nu_side, 0.0);
  EXPECT_EQ(tv_bound_matched(d, d, 1.3), 0.0);
}

TEST(TvBoundContinuous, ExponentialPairIsTight) {
  // Ratio 2e^{-x} is log-linear, so both integrals equal the TV, 1/4.
  const auto b = tv_bound_continuous(exponential_density(1), exponential_density(2), 1.0);
  EXPECT_NEAR(b.delta, -1.0, 1e-14);
  EXPECT_NEAR(b.ratio, 2 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(b.mu_side, 0.25, 1e-11);
  EXPECT_NEAR(b.nu_side, 0.25, 1e-11);
  const auto tv = tv_gamma_quadrature({1, 1}, {1, 2});
  EXPECT_NEAR(tv.hi, 0.25, 1e-10);
  EXPECT_NEAR(tv.lo, 0.25, 1e-10);
  EXPECT_THROW(tv_bound_matched(exponential_density(1), exponential_density(2), 1.0), NotApplicable);
}

TEST(TvBoundContinuous, GammaMatchedPoint) {
  const auto mu = gamma_density({1, 1});
  const auto nu = gamma_density({2, 2});
  const auto b = tv_bound_continuous(mu, nu, 1.0);
  EXPECT_NEAR(b.delta, 0.0, 1e-15);
  EXPECT_NEAR(b.mu_side, 4 / std::exp(1.0) - 1, 1e-10);
  EXPECT_NEAR(b.nu_side, 1 - std::exp(1.0) / 4, 1e-10);
  EXPECT_NEAR(tv_bound_matched(mu, nu, 1.0), 1 - std::exp(1.0) / 4, 1e-15);
  EXPECT_NEAR(tv_bound_matched(mu, nu, 1.0), 0.3204, 1e-4);
  EXPECT_THROW(tv_bound_matched(nu, mu, 1.0), NotApplicable);
  EXPECT_THROW(tv_bound_continuous(mu, gamma_density({2, 2}), 0.0), NotApplicable);
}

TEST(GammaQuadrature, CrossingsAndTv) {
  const auto c = gamma_crossings({2, 2}, {1, 1});
  ASSERT_EQ(c.size(), 2u);
  auto g = [](double x) { return 4 * x - std::exp(x); };
  EXPECT_NEAR(c[0], bisect(g, 0.0, 1.0), 1e-12);
  EXPECT_NEAR(c[1], bisect(g, 1.0, 3.0), 1e-12);
  EXPECT_NEAR(c[0], 0.3574, 1e-4);
  EXPECT_NEAR(c[1], 2.1533, 1e-4);
  const auto tv = tv_gamma_quadrature({2, 2}, {1, 1});
  EXPECT_NEAR(tv.hi, 0.1841, 1e-3);
  const double exact = erlang_tv(2, 2, 1, 1);
  EXPECT_LE(tv.lo, exact + 1e-14);
  EXPECT_GE(tv.hi, exact - 1e-14);
  EXPECT_LE(tv.hi - tv.lo, 2.1e-12);
  EXPECT_EQ(tv_gamma_quadrature({2, 2}, {2, 2}).hi, 0.0);
  EXPECT_TRUE(gamma_crossings({2, 2}, {2, 2}).empty());
}

TEST(GammaQuadrature, RandomAgainstSimpson) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> kd(1.0, 6.0), ld(0.5, 3.0);
  for (int t = 0; t < 30; ++t) {
    const GammaParams a{kd(rng), ld(rng)}, b{kd(rng), ld(rng)};
    const auto tv = tv_gamma_quadrature(a, b);
    EXPECT_NEAR(tv.hi, simpson_tv(a, b, 80.0), 1e-4) << a.kappa << " " << a.lambda << " " << b.kappa << " " << b.lambda;
    EXPECT_NEAR(tv.hi, tv_gamma_quadrature(b, a).hi, 1e-12);
    EXPECT_LE(gamma_crossings(a, b).size(), 2u);
  }
}

TEST(GammaCaseI, Examples) {
  const auto r = gamma_bound_case_i({2, 2}, {1, 1});
  ASSERT_TRUE(r.applicable());
  EXPECT_NEAR(r.parameter("z")->value, 1.0, 1e-15);
  EXPECT_NEAR(*r.simplified, 0.3204, 1e-4);
  EXPECT_NEAR(*r.simplified, std::min(4 / std::exp(1.0) - 1, 1 - std::exp(1.0) / 4), 1e-15);
  EXPECT_NEAR(r.oracle_tv->hi, 0.1841129, 1e-6);
  EXPECT_EQ(r.dominated, std::optional<bool>(true));
  // Integer shapes with Gamma(2) = Gamma(1): the product without the Gamma ratio is exact.
  EXPECT_NEAR(r.closed_form("without_gamma_ratio")->raw, r.closed_form("matched")->raw, 1e-15);

  const auto swapped = gamma_bound_case_i({1, 1}, {2, 2});
  EXPECT_EQ(swapped.parameter("swapped")->value, 1.0);
  EXPECT_NEAR(*swapped.simplified, *r.simplified, 1e-15);

  EXPECT_FALSE(gamma_bound_case_i({2, 2}, {2, 2}).applicable());
  EXPECT_FALSE(gamma_bound_case_i({2, 1}, {1, 2}).applicable());
  EXPECT_FALSE(gamma_bound_case_i({2, 1}, {1, 1}).applicable());

  const auto r3 = gamma_bound_case_i({3, 2.5}, {2, 1.5});
  EXPECT_NEAR(r3.parameter("z")->value, 1.0, 1e-15);
  // Ratio (2.5^3 / 1.5^2) e^{-1} / 2 with Gamma(3)/Gamma(2) = 2.
  const double a = std::pow(2.5, 3) / std::pow(1.5, 2) * std::exp(-1.0) / 2;
  EXPECT_NEAR(*r3.simplified, std::min(a - 1, 1 - 1 / a), 1e-14);
  EXPECT_NEAR(*r3.simplified, 0.217135, 1e-6);
  const double exact3 = erlang_tv(3, 2.5, 2, 1.5);
  EXPECT_LE(r3.oracle_tv->lo, exact3 + 1e-14);
  EXPECT_GE(r3.oracle_tv->hi, exact3 - 1e-14);
  EXPECT_NEAR(r3.oracle_tv->hi, 0.117895, 1e-6);
  EXPECT_EQ(r3.dominated, std::optional<bool>(true));
}

TEST(GammaCaseI, ProductWithoutGammaRatio) {
  // Non-integer shapes: without Gamma(kappa2)/Gamma(kappa1) the value is negative here.
  const auto r = gamma_bound_case_i({0.5, 2}, {0.25, 1});
  ASSERT_TRUE(r.applicable());
  EXPECT_LT(r.closed_form("without_gamma_ratio")->raw, 0.0);
  EXPECT_FALSE(r.closed_form("without_gamma_ratio")->asserted);
  EXPECT_FALSE(*r.closed_form("without_gamma_ratio")->dominates);
  EXPECT_TRUE(*r.closed_form("matched")->dominates);
  EXPECT_EQ(r.dominated, std::optional<bool>(true));
}

TEST(GammaCaseI, RandomDominanceAndTwoPaths) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> kd(0.3, 5.0), ld(0.3, 5.0);
  int applicable = 0;
  for (int t = 0; t < 600; ++t) {
    const GammaParams a{kd(rng), ld(rng)}, b{kd(rng), ld(rng)};
    const auto r = gamma_bound_case_i(a, b);
    if (!r.applicable()) continue;
    ++applicable;
    EXPECT_EQ(r.dominated, std::optional<bool>(true));
    const bool sw = r.parameter("swapped")->value == 1.0;
    const auto& nu = sw ? b : a;
    const auto& mu = sw ? a : b;
    const double z = r.parameter("z")->value;
    const double via_matched = tv_bound_matched(gamma_density(mu), gamma_density(nu), z);
    EXPECT_NEAR(via_matched, r.closed_form("matched")->raw, 1e-9 * std::max(1.0, via_matched));
    if (r.bound_nu_side) {
      EXPECT_NEAR(*r.bound_nu_side, std::min(1.0, -std::expm1(-std::log(r.parameter("density_ratio")->value))), 1e-7);
    }
  }
  EXPECT_GT(applicable, 200);
}

TEST(GammaCaseII, Formulas) {
  EXPECT_NEAR(gamma_case_ii_formula({1, 1}, {1, 1.1}, 1.0), 12 * std::sqrt(0.1 / 1.1), 1e-14);
  EXPECT_NEAR(gamma_equal_shape_formula(1, 1, 1.1), 3.618, 1e-3);
  EXPECT_NEAR(gamma_case_ii_formula({2, 2}, {2, 2}, std::exp(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(gamma_case_ii_formula({2, 2}, {2, 2}, 1.0), 0.0, 1e-15);
  const double w = std::pow(4 / std::exp(1.0), -0.2);
  const double expected = std::fabs(w - 1) + w * 3.2 * 4 * std::sqrt(0.2 / 4);
  EXPECT_NEAR(gamma_case_ii_formula({1, 1}, {1.2, 1}, 4.0), expected, 1e-14);
  EXPECT_NEAR(gamma_equal_rate_formula(1, 1.2, 1), std::fabs(w - 1) + w * 3.2 * 4 * std::sqrt(0.2), 1e-14);
  EXPECT_THROW(gamma_case_ii_formula({1, 1}, {1, 3}, 1.0), NotApplicable);
  EXPECT_THROW(gamma_case_ii_formula({1, 1}, {1, 1}, 0.0), NotApplicable);
  EXPECT_THROW(gamma_equal_shape_formula(1, 1, 2), NotApplicable);
  EXPECT_THROW(gamma_equal_rate_formula(3, 1, 1), NotApplicable);
}

TEST(GammaCaseII, Reports) {
  const auto e = gamma_bound_case_ii({1, 1}, {1, 1.1}, 1.0);
  ASSERT_TRUE(e.applicable());
  const double xs = std::log(1.1) / 0.1;
  EXPECT_NEAR(e.oracle_tv->hi, std::exp(-xs) - std::exp(-1.1 * xs), 1e-11);
  EXPECT_NEAR(e.closed_form("equal_shapes")->raw, e.closed_form("general")->raw, 1e-14);
  EXPECT_DOUBLE_EQ(e.closed_form("general")->clamped(), 1.0);
  EXPECT_EQ(e.dominated, std::optional<bool>(true));

  // kappa1 < kappa2: the formula is evaluated but the theorem does not apply.
  const auto q = gamma_bound_case_ii({1, 1}, {1.2, 1}, 4.0);
  EXPECT_FALSE(q.applicable());
  EXPECT_GE(q.closed_form("equal_rates")->raw, q.closed_form("general")->raw);

  const auto bad = gamma_bound_case_ii({0.352924, 3.56585}, {1.53627, 4.02261}, 2.62777);
  EXPECT_FALSE(bad.applicable());
  EXPECT_FALSE(*bad.closed_form("general")->dominates);
  EXPECT_NEAR(bad.closed_form("general")->raw, 0.348164, 1e-6);
  EXPECT_NEAR(bad.oracle_tv->hi, 0.571876, 1e-6);

  EXPECT_FALSE(gamma_bound_case_ii({1, 1}, {1, 3}, 1.0).applicable());
}

TEST(GammaCaseII, EmpiricalDominanceWhenLogConcave) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> kd(0.3, 5.0), ld(0.3, 5.0), zd(0.05, 10.0);
  int checked = 0;
  for (int t = 0; t < 1500; ++t) {
    GammaParams a{kd(rng), ld(rng)}, b{kd(rng), ld(rng)};
    if (a.kappa < b.kappa) std::swap(a, b);
    const auto r = gamma_bound_case_ii(a, b, zd(rng));
    if (!r.applicable()) continue;
    ++checked;
    EXPECT_TRUE(*r.closed_form("general")->dominates);
    EXPECT_EQ(r.dominated, std::optional<bool>(true));
  }
  EXPECT_GT(checked, 300);
}
