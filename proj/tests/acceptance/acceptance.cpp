// Acceptance criteria 1-10, one PASS/FAIL line each. Oracles are computed
// here independently of the library. `acceptance N` runs criterion N only.

#include "rlc/compound.hpp"
#include "rlc/continuous.hpp"
#include "rlc/intrinsic_volumes.hpp"
#include "rlc/matroids.hpp"
#include "rlc/relbound.hpp"
#include "rlc/sums.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rlc;

namespace {

class Checks {
 public:
  void add(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    parts_.push_back((ok ? "" : "FAILED ") + what);
  }
  void near(const std::string& name, double got, double want, double tol) {
    std::ostringstream s;
    s.precision(10);
    s << name << " " << got << " (want " << want << " +- " << tol << ")";
    add(std::fabs(got - want) <= tol, s.str());
  }
  bool pass() const { return pass_; }
  std::string text() const {
    std::string out;
    for (const auto& p : parts_) out += (out.empty() ? "" : "; ") + p;
    return out;
  }

 private:
  bool pass_ = true;
  std::vector<std::string> parts_;
};

std::string num(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

long double tv_oracle(const DiscreteDist& a, const DiscreteDist& b) {
  const Index lo = std::min(a.offset(), b.offset());
  const Index hi = std::max(a.last(), b.last());
  long double s = 0.0L;
  for (Index k = lo; k <= hi; ++k) s += std::fabs(static_cast<long double>(a.at(k)) - b.at(k));
  return s / 2.0L;
}

std::vector<long double> binomial_pmf(int n, long double p) {
  std::vector<long double> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    out[static_cast<std::size_t>(k)] = std::exp(std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L)) *
                                       std::pow(p, static_cast<long double>(k)) * std::pow(1.0L - p, static_cast<long double>(n - k));
  }
  return out;
}

long double poisson_pmf(long double lambda, int k) {
  return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0L));
}

// TV between a law on {0..} given by masses and Poisson(lambda).
long double tv_to_poisson(const std::vector<long double>& q, long double lambda) {
  long double s = 0.0L, covered = 0.0L;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const long double pk = poisson_pmf(lambda, static_cast<int>(k));
    s += std::fabs(q[k] - pk);
    covered += pk;
  }
  return (s + (1.0L - covered)) / 2.0L;
}

double bisect(const std::function<double(double)>& g, double a, double b) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    ((g(a) < 0) == (g(m) < 0) ? a : b) = m;
  }
  return 0.5 * (a + b);
}

Checks criterion1() {
  Checks c;
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<int> length(2, 60), offset(-10, 10);
  std::uniform_real_distribution<double> mass(0.05, 1.0), spread(0.05, 1.5);
  std::normal_distribution<double> slope(0.0, 1.0);
  const auto start = std::chrono::steady_clock::now();
  int dominated = 0, refused = 0;
  double worst = INFINITY;
  for (int i = 0; i < 500; ++i) {
    const int n = length(rng);
    const Index off = offset(rng);
    std::vector<double> mu(static_cast<std::size_t>(n));
    for (double& m : mu) m = mass(rng);
    // Convex V from non-decreasing slopes.
    std::vector<double> slopes(static_cast<std::size_t>(n));
    const double s = spread(rng);
    for (double& v : slopes) v = s * slope(rng);
    std::sort(slopes.begin(), slopes.end());
    std::vector<double> nu(mu.size());
    double V = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
      nu[k] = mu[k] * std::exp(-V);
      V += slopes[k];
    }
    const DiscreteDist dmu = make_dist<double>(off, mu);
    const DiscreteDist dnu = make_dist<double>(off, nu);
    const BoundReport r = certify(dmu, dnu);
    if (!r.applicable() || !r.bound_nu_side || !r.bound_mu_side) {
      ++refused;
      continue;
    }
    const double bound = std::min(*r.bound_nu_side, *r.bound_mu_side);
    const double slack = bound - static_cast<double>(tv_oracle(dmu, dnu));
    worst = std::min(worst, slack);
    if (slack >= -1e-10) ++dominated;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.add(dominated == 500, std::to_string(dominated) + "/500 dominated, " + std::to_string(refused) + " refused");
  c.add(worst >= -1e-10, "worst slack " + num(worst));
  c.add(secs < 10.0, "runtime " + num(secs) + " s");
  return c;
}

Checks criterion2() {
  Checks c;
  const BoundReport r = binomial_report(BernoulliVector({0.1, 0.2}));
  // Poisson-binomial (0.72, 0.26, 0.02) against Binomial(2, 1 - 1/m), m the mean of 1/(1 - p_i).
  const long double m = (1.0L / 0.9L + 1.0L / 0.8L) / 2.0L;
  const auto b = binomial_pmf(2, 1.0L - 1.0L / m);
  const long double pb[] = {0.72L, 0.26L, 0.02L};
  long double tv = 0.0L;
  for (int k = 0; k < 3; ++k) tv += std::fabs(pb[k] - b[static_cast<std::size_t>(k)]) / 2.0L;
  c.near("bound", r.best_bound().value_or(NAN), 0.003462, 1e-6);
  c.near("oracle TV", static_cast<double>(tv), 0.003391, 1e-6);
  c.add(r.oracle_tv && r.oracle_tv->lo <= tv + 1e-15 && tv <= r.oracle_tv->hi + 1e-15, "library oracle agrees");
  c.add(r.dominated.value_or(false) && r.best_bound().value_or(-1) >= tv - 1e-10, "dominated");
  return c;
}

Checks criterion3() {
  Checks c;
  double prev = NAN;
  std::string scaled;
  for (int n : {10, 20, 40, 80}) {
    const BernoulliVector bv(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
    const double closed = std::expm1(n / ((n - 1.0) * (n - 1.0)));
    c.add(std::fabs(poisson_bound(bv) - closed) <= 1e-12,
          "n=" + std::to_string(n) + " bound " + num(poisson_bound(bv)) + " vs " + num(closed));
    // lambda = sum p_i / (1 - p_i).
    const long double lambda = n * (1.0L / n) / (1.0L - 1.0L / n);
    const double tv = static_cast<double>(tv_to_poisson(binomial_pmf(n, 1.0L / n), lambda));
    const double nt = n * tv;
    scaled += (scaled.empty() ? "" : ", ") + num(nt);
    if (!std::isnan(prev)) c.add(nt <= 1.2 * prev, "n*TV(" + std::to_string(n) + ") within 20% of previous");
    const BoundReport r = poisson_report(bv);
    c.add(r.dominated.value_or(false) && r.oracle_tv && std::fabs(r.oracle_tv->hi - tv) <= 1e-12,
          "n=" + std::to_string(n) + " dominated, oracle agrees");
    prev = nt;
  }
  c.add(true, "n*TV = " + scaled);
  return c;
}

Checks criterion4() {
  Checks c;
  for (const Rational& q : {Rational(1, 4), Rational(3, 10), Rational(2, 3)}) {
    for (int n : {1, 3, 6}) {
      const std::vector<Rational> p(static_cast<std::size_t>(n), q);
      // Exact Poisson-binomial by convolution against C(n, k) q^k (1 - q)^(n - k).
      std::vector<Rational> pb{Rational(1)};
      for (int i = 0; i < n; ++i) {
        std::vector<Rational> next(pb.size() + 1, Rational(0));
        for (std::size_t k = 0; k < pb.size(); ++k) {
          next[k] += pb[k] * (1 - q);
          next[k + 1] += pb[k] * q;
        }
        pb = next;
      }
      Rational own(0);
      for (int k = 0; k <= n; ++k) {
        const Rational bk = Rational(binomial_coefficient(n, k)) * pow(q, k) * pow(1 - q, n - k);
        own += abs(pb[static_cast<std::size_t>(k)] - bk);
      }
      const auto tv = tv_distance(poisson_binomial_pmf_exact(p), binomial_target_exact(p));
      const std::string tag = to_string(q) + " x" + std::to_string(n);
      c.add(binomial_bound_primary_exact(p) == 0, tag + " bound 0");
      c.add(own == 0 && tv.lo == 0 && tv.hi == 0, tag + " TV 0");
    }
  }
  return c;
}

Checks criterion5() {
  Checks c;
  const PartitionMatroidSpec spec{{2, 2}, {1, 1}};
  const IndepProfile prof = profile_partition(spec);
  const auto ex = matroid_binomial_exact(prof, 1);
  c.add(ex.p == Rational(2, 5), "p = " + to_string(ex.p));
  const BoundReport r = matroid_binomial_bound(prof, 1);
  c.near("upper", r.closed_form("upper") ? r.closed_form("upper")->raw : NAN, 0.4468, 1e-4);
  c.near("lower", r.closed_form("lower") ? r.closed_form("lower")->raw : NAN, 0.3089, 1e-4);
  // Enumerated: I = (1, 4, 4); nu = (0, 1/2, 1/2) against Binomial(4, p),
  // p = (1 + ((n - m)/(m + 1)) I(1)/I(2))^-1 = 2/5.
  const auto g = binomial_pmf(4, 1.0L / (1.0L + 1.5L * 4.0L / 4.0L));
  const long double nu[] = {0.0L, 0.5L, 0.5L, 0.0L, 0.0L};
  long double tv = 0.0L;
  for (int k = 0; k <= 4; ++k) tv += std::fabs(nu[k] - g[static_cast<std::size_t>(k)]) / 2.0L;
  c.near("oracle TV", static_cast<double>(tv), 0.3088, 1e-4);
  c.add(r.dominated.value_or(false) && r.closed_form("lower")->raw >= tv - 1e-10, "dominated");

  std::mt19937_64 rng(424242);
  int agree = 0, mason = 0;
  for (int t = 0; t < 200; ++t) {
    PartitionMatroidSpec s;
    int total = 0;
    const int target = std::uniform_int_distribution<int>(1, 16)(rng);
    while (total < target) {
      const int size = std::uniform_int_distribution<int>(1, target - total)(rng);
      s.sizes.push_back(size);
      s.capacities.push_back(std::uniform_int_distribution<int>(0, size)(rng));
      total += size;
    }
    std::vector<int> category;
    for (std::size_t i = 0; i < s.sizes.size(); ++i) category.insert(category.end(), static_cast<std::size_t>(s.sizes[i]), static_cast<int>(i));
    std::vector<unsigned long long> counts(static_cast<std::size_t>(total) + 1, 0);
    for (std::uint32_t set = 0; set < (1u << total); ++set) {
      std::vector<int> used(s.sizes.size(), 0);
      bool independent = true;
      for (int e = 0; e < total; ++e) {
        if ((set >> e & 1u) && ++used[static_cast<std::size_t>(category[static_cast<std::size_t>(e)])] >
                                   s.capacities[static_cast<std::size_t>(category[static_cast<std::size_t>(e)])]) {
          independent = false;
        }
      }
      if (independent) ++counts[static_cast<std::size_t>(std::popcount(set))];
    }
    const IndepProfile p = profile_partition(s);
    bool same = true;
    for (int k = 0; k <= total; ++k) same = same && p[k] == BigInt(counts[static_cast<std::size_t>(k)]);
    agree += same;
    bool ulc = true;
    for (int k = 1; k < total; ++k) {
      const unsigned long long a = counts[static_cast<std::size_t>(k)];
      const unsigned long long lhs = a * a * static_cast<unsigned long long>(k * (total - k));
      const unsigned long long rhs = counts[static_cast<std::size_t>(k - 1)] * counts[static_cast<std::size_t>(k + 1)] *
                                     static_cast<unsigned long long>((k + 1) * (total - k + 1));
      ulc = ulc && lhs >= rhs;
    }
    mason += ulc && mason_check(p).holds;
  }
  c.add(agree == 200, std::to_string(agree) + "/200 profiles match enumeration");
  c.add(mason == 200, std::to_string(mason) + "/200 Mason checks pass");
  return c;
}

Checks criterion6() {
  Checks c;
  const DiscreteDist z = z_dist(iv_cube(3, 1.0));
  bool exact = z.offset() == 0 && z.size() == 4;
  for (int k = 0; exact && k <= 3; ++k) exact = z.at(k) == to_double(Rational(binomial_coefficient(3, k), 8));
  c.add(exact, "cube(3,1) Z = Binomial(3, 1/2) exactly");

  const BoundReport r = poisson_iv_bound(iv_box({0.1, 0.2}), 0);
  const NamedBound* pb = r.closed_form("poisson");
  c.near("poisson bound", pb ? pb->raw : NAN, 0.02262, 1e-5);
  // V = (1, s1 + s2, s1 s2), Z = V / W against Poisson(V_1).
  const long double V[] = {1.0L, 0.3L, 0.02L};
  const long double W = V[0] + V[1] + V[2];
  const long double tv = tv_to_poisson({V[0] / W, V[1] / W, V[2] / W}, V[1]);
  c.near("oracle TV", static_cast<double>(tv), 0.02179, 1e-5);
  c.add(r.dominated.value_or(false) && pb && pb->raw >= tv - 1e-10, "dominated");
  const double product = product_bounds({ProductFactor::segment(0.1), ProductFactor::segment(0.2)}, ProductMode::box);
  c.add(std::fabs(product - std::expm1(0.05)) <= 1e-12 && pb && product >= pb->raw,
        "product " + num(product) + " = e^0.05 - 1 >= poisson bound");
  return c;
}

Checks criterion7() {
  Checks c;
  const CompoundPoissonSpec spec{3.0, DiscreteDist(0, {0.7, 0.3})};
  const DiscreteDist x = compound_poisson_pmf(spec);
  double worst = 0.0;
  for (Index k = 0; k <= x.last() + 5; ++k) worst = std::max(worst, std::fabs(x.at(k) - static_cast<double>(poisson_pmf(0.9L, static_cast<int>(k)))));
  c.add(worst <= 1e-12, "Panjer vs Poisson(0.9) max gap " + num(worst));
  const BoundReport r = geometric_bound_compound_poisson(spec);
  c.near("bound", r.best_bound().value_or(NAN), 0.754, 1e-3);
  // Poisson(0.9) against the geometric law 0.1 * 0.9^k.
  long double tv = 0.0L;
  for (int k = 0; k < 2000; ++k) tv += std::max(0.0L, poisson_pmf(0.9L, k) - 0.1L * std::pow(0.9L, static_cast<long double>(k)));
  c.near("oracle TV", static_cast<double>(tv), 0.666, 1e-3);
  c.add(r.dominated.value_or(false) && r.best_bound().value_or(-1) >= tv - 1e-10, "dominated");
  return c;
}

Checks criterion8() {
  Checks c;
  const GammaParams a{2, 2}, b{1, 1};
  const BoundReport r = gamma_bound_case_i(a, b);
  c.near("bound", r.best_bound().value_or(NAN), 0.3204, 1e-4);
  // 4x e^{-2x} = e^{-x} where log(4x) = x.
  const auto g = [](double x) { return std::log(4.0 * x) - x; };
  const double x1 = bisect(g, 0.01, 1.0), x2 = bisect(g, 1.0, 10.0);
  const auto Fa = [](double x) { return 1.0 - (1.0 + 2.0 * x) * std::exp(-2.0 * x); };
  const auto Fb = [](double x) { return 1.0 - std::exp(-x); };
  const double tv = std::fabs((Fa(x2) - Fb(x2)) - (Fa(x1) - Fb(x1)));
  const auto lib = gamma_crossings(a, b);
  c.near("crossing 1", lib.size() == 2 ? lib[0] : NAN, x1, 1e-4);
  c.near("crossing 2", lib.size() == 2 ? lib[1] : NAN, x2, 1e-4);
  c.near("oracle crossing 1", x1, 0.3574, 1e-4);
  c.near("oracle crossing 2", x2, 2.1533, 1e-4);
  const TvInterval q = tv_gamma_quadrature(a, b);
  c.near("quadrature TV", 0.5 * (q.lo + q.hi), 0.1841, 1e-3);
  c.add(q.lo - 1e-10 <= tv && tv <= q.hi + 1e-10, "quadrature brackets closed form " + num(tv));
  c.add(r.dominated.value_or(false) && r.best_bound().value_or(-1) >= tv - 1e-10, "dominated");
  const TvInterval e = tv_gamma_quadrature({1, 1}, {1, 2});
  // Crossing at log 2: e^{-x} - e^{-2x} = 1/4.
  c.near("TV(Exp(1), Exp(2)) lo", e.lo, 0.25, 1e-10);
  c.near("TV(Exp(1), Exp(2)) hi", e.hi, 0.25, 1e-10);
  return c;
}

Checks criterion9() {
  Checks c;
  const BoundReport r = exp_kolmogorov_bound(builtin_density("exp-quadratic"));
  // int_0^inf e^{-x - x^2/2} dx = e^{1/2} sqrt(2 pi) (1 - Phi(1)).
  const double Phi1 = 0.5 * std::erfc(-1.0 / std::numbers::sqrt2);
  const double k = std::exp(0.5) * std::sqrt(2.0 * std::numbers::pi);
  const double cc = 1.0 / (k * (1.0 - Phi1));
  const Parameter* f0 = r.parameter("f0");
  c.near("c", f0 ? f0->value : NAN, 1.5251, 1e-3);
  c.near("c vs closed form", f0 ? f0->value : NAN, cc, 1e-8);
  c.near("bound", r.best_bound().value_or(NAN), cc - 1.0, 1e-8);
  const auto F = [&](double x) { return cc * k * (0.5 * std::erfc(-(x + 1.0) / std::numbers::sqrt2) - Phi1); };
  double dk = 0.0;
  for (int i = 0; i <= 400000; ++i) {
    const double x = i * 5e-5;
    dk = std::max(dk, std::fabs(F(x) - (1.0 - std::exp(-x))));
  }
  c.add(r.oracle_tv && r.oracle_tv->lo - 1e-8 <= dk && dk <= r.oracle_tv->hi + 1e-8, "d_K " + num(dk) + " agrees");
  c.add(r.dominated.value_or(false) && r.best_bound().value_or(-1) >= dk, "dominated");
  return c;
}

// a_k^2 k (n - k) >= a_{k-1} a_{k+1} (k + 1)(n - k + 1) on a positive window from 0.
bool ulc_oracle(const std::vector<Rational>& a, int n) {
  for (std::size_t k = 1; k + 1 < a.size(); ++k) {
    const int j = static_cast<int>(k);
    if (a[k] * a[k] * j * (n - j) < a[k - 1] * a[k + 1] * (j + 1) * (n - j + 1)) return false;
  }
  return true;
}

std::vector<Rational> random_ulc(std::mt19937_64& rng, int n) {
  // C(n, k) w_k with w log-concave: ratios w_{k+1}/w_k non-increasing.
  std::uniform_int_distribution<int> num(1, 30), den(1, 12);
  std::vector<Rational> ratio(static_cast<std::size_t>(n));
  for (auto& r : ratio) r = Rational(num(rng), den(rng));
  std::sort(ratio.begin(), ratio.end(), std::greater<>());
  std::vector<Rational> a{Rational(1)};
  Rational w(1);
  for (int k = 1; k <= n; ++k) {
    w *= ratio[static_cast<std::size_t>(k - 1)];
    a.push_back(Rational(binomial_coefficient(n, k)) * w);
  }
  return a;
}

Checks criterion10() {
  Checks c;
  std::mt19937_64 rng(99);
  int closed = 0;
  for (int t = 0; t < 100; ++t) {
    const int n1 = std::uniform_int_distribution<int>(1, 14)(rng);
    const int n2 = std::uniform_int_distribution<int>(1, 15 - n1)(rng);
    const auto a = random_ulc(rng, n1), b = random_ulc(rng, n2);
    std::vector<Rational> conv(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) conv[i + j] += a[i] * b[j];
    const bool lib = is_ulc<Rational>(conv, n1 + n2).holds;
    closed += ulc_oracle(a, n1) && ulc_oracle(b, n2) && ulc_oracle(conv, n1 + n2) && lib;
  }
  c.add(closed == 100, "ULC closure " + std::to_string(closed) + "/100");

  int agree = 0, total = 0, ulc_count = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 15)(rng);
    std::vector<Rational> a;
    if (t % 2 == 0) {
      a = random_ulc(rng, n);
    } else {
      for (int k = 0; k <= n; ++k) a.push_back(Rational(std::uniform_int_distribution<int>(1, 50)(rng)));
    }
    const bool own = ulc_oracle(a, n);
    ulc_count += own;
    const ExactDist nu(0, a);
    for (const Rational& p : {Rational(1, 10), Rational(1, 2), Rational(9, 10)}) {
      ++total;
      agree += own == is_log_concave_relative(nu, binomial_exact(n, p)).holds && own == is_ulc<Rational>(a, n).holds;
    }
  }
  c.add(agree == total, "ULC(n) <=> binomial-relative " + std::to_string(agree) + "/" + std::to_string(total) + " (" +
                            std::to_string(ulc_count) + " ULC)");

  // x - x^2/2 <= log(1 + x) <= x - x^2/2 + x^3/3 on x in (-0.9, 10).
  std::uniform_real_distribution<long double> xs(-0.9L, 10.0L);
  int upper_bad = 0, lower_bad = 0, lower_bad_nonneg = 0;
  long double witness = 0.0L;
  for (int i = 0; i < 10000; ++i) {
    const long double x = xs(rng);
    const long double l = std::log1p(x);
    if (l > x - x * x / 2 + x * x * x / 3) ++upper_bad;
    if (x - x * x / 2 > l) {
      ++lower_bad;
      if (x >= 0) ++lower_bad_nonneg;
      witness = x;
    }
  }
  c.add(upper_bad == 0, "logTaylor upper half: " + std::to_string(upper_bad) + " violations");
  c.add(lower_bad == 0, "logTaylor lower half: " + std::to_string(lower_bad) + " violations (" +
                            std::to_string(lower_bad_nonneg) + " with x >= 0; e.g. x = " +
                            num(static_cast<double>(witness)) + ")");
  return c;
}

const std::vector<std::pair<const char*, Checks (*)()>> kCriteria = {
    {"dominance sweep", criterion1},        {"Poisson-binomial binomial bound", criterion2},
    {"law of rare events", criterion3},     {"all-equal Bernoulli", criterion4},
    {"matroid", criterion5},                {"intrinsic volumes", criterion6},
    {"compound Poisson thinning", criterion7}, {"Gamma case i", criterion8},
    {"exponential Kolmogorov bound", criterion9}, {"certificate suite", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (argc > 2 || only < 0 || only > static_cast<int>(kCriteria.size())) {
    std::fprintf(stderr, "usage: %s [criterion 1-10]\n", argv[0]);
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Checks c;
    try {
      c = kCriteria[i].second();
    } catch (const std::exception& e) {
      c.add(false, std::string("exception: ") + e.what());
    }
    all = all && c.pass();
    std::printf("%s criterion %zu (%s): %s\n", c.pass() ? "PASS" : "FAIL", i + 1, kCriteria[i].first, c.text().c_str());
  }
  return all ? 0 : 1;
}
