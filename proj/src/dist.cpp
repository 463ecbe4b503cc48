#include "rlc/dist.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

namespace rlc {

std::string to_string(const Rational& r) {
  std::string s = boost::multiprecision::numerator(r).str();
  const BigInt den = boost::multiprecision::denominator(r);
  if (den != 1) s += "/" + den.str();
  return s;
}

BigInt binomial_coefficient(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (int i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

DiscreteDist to_double(const ExactDist& d) {
  std::vector<double> m;
  m.reserve(d.size());
  for (const Rational& r : d.masses()) m.push_back(to_double(r));
  return DiscreteDist(d.offset(), std::move(m), to_double(d.tail_deficit()));
}

ExactDist to_exact(const DiscreteDist& d) {
  std::vector<Rational> m;
  m.reserve(d.size());
  for (double x : d.masses()) m.emplace_back(x);
  return ExactDist(d.offset(), std::move(m), Rational(d.tail_deficit()));
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput(std::string(what) + ": probability must lie in [0, 1]");
}

void check_budget(double b) {
  if (!(b > 0.0 && b < 1.0)) throw InvalidInput("tail budget must lie in (0, 1)");
}

// Fills masses[k] for k in [0, size) from the mode outward using the ratio
// masses[k+1]/masses[k] = ratio(k), anchored at log_mode_mass.
template <class Ratio>
void fill_from_mode(std::vector<double>& masses, std::size_t mode, double log_mode_mass, Ratio ratio) {
  masses[mode] = std::exp(log_mode_mass);
  for (std::size_t k = mode; k + 1 < masses.size(); ++k) masses[k + 1] = masses[k] * ratio(k);
  for (std::size_t k = mode; k > 0; --k) masses[k - 1] = masses[k] / ratio(k - 1);
}

}  // namespace

DiscreteDist family_bernoulli(double p) {
  check_probability(p, "bernoulli");
  return DiscreteDist(0, {1.0 - p, p});
}

DiscreteDist family_binomial(int n, double p) {
  if (n < 0) throw InvalidInput("binomial: n must be non-negative");
  check_probability(p, "binomial");
  std::vector<double> m(static_cast<std::size_t>(n) + 1, 0.0);
  if (p == 0.0) {
    m.front() = 1.0;
  } else if (p == 1.0) {
    m.back() = 1.0;
  } else {
    const auto mode = static_cast<std::size_t>(std::min<double>(n, std::floor((n + 1) * p)));
    const double log_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) - std::lgamma(n - mode + 1.0) +
                            static_cast<double>(mode) * std::log(p) +
                            static_cast<double>(n - static_cast<int>(mode)) * std::log1p(-p);
    const double odds = p / (1.0 - p);
    fill_from_mode(m, mode, log_mode, [&](std::size_t k) {
      return static_cast<double>(n - static_cast<int>(k)) / static_cast<double>(k + 1) * odds;
    });
  }
  return DiscreteDist(0, std::move(m));
}

DiscreteDist family_poisson(double lambda, double tail_budget, Index min_last) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("poisson: lambda must be non-negative");
  check_budget(tail_budget);
  if (lambda == 0.0) {
    std::vector<double> m(static_cast<std::size_t>(std::max<Index>(min_last, 0)) + 1, 0.0);
    m[0] = 1.0;
    return DiscreteDist(0, std::move(m));
  }
  // Smallest K with P[X > K] = P(K + 1, lambda) <= budget.
  std::size_t last = static_cast<std::size_t>(std::ceil(lambda));
  double tail = boost::math::gamma_p(static_cast<double>(last) + 1.0, lambda);
  while (tail > tail_budget) {
    ++last;
    tail = boost::math::gamma_p(static_cast<double>(last) + 1.0, lambda);
  }
  while (last > 0) {
    const double t = boost::math::gamma_p(static_cast<double>(last), lambda);
    if (t > tail_budget) break;
    --last;
    tail = t;
  }
  if (min_last > static_cast<Index>(last)) {
    last = static_cast<std::size_t>(min_last);
    tail = boost::math::gamma_p(static_cast<double>(last) + 1.0, lambda);
  }
  std::vector<double> m(last + 1, 0.0);
  const auto mode = std::min<std::size_t>(last, static_cast<std::size_t>(std::floor(lambda)));
  const double log_mode = -lambda + static_cast<double>(mode) * std::log(lambda) - std::lgamma(mode + 1.0);
  fill_from_mode(m, mode, log_mode, [&](std::size_t k) { return lambda / static_cast<double>(k + 1); });
  return DiscreteDist(0, std::move(m), tail);
}

DiscreteDist family_geometric(double theta, double tail_budget, Index min_last) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidInput("geometric: theta must lie in (0, 1]");
  check_budget(tail_budget);
  if (theta == 1.0) {
    std::vector<double> m(static_cast<std::size_t>(std::max<Index>(min_last, 0)) + 1, 0.0);
    m[0] = 1.0;
    return DiscreteDist(0, std::move(m));
  }
  // P[X > K] = q^{K+1}.
  const double log_q = std::log1p(-theta);
  auto last = static_cast<std::size_t>(std::max(0.0, std::ceil(std::log(tail_budget) / log_q - 1.0)));
  while (last > 0 && std::exp(static_cast<double>(last) * log_q) <= tail_budget) --last;
  while (std::exp(static_cast<double>(last + 1) * log_q) > tail_budget) ++last;
  last = std::max(last, static_cast<std::size_t>(std::max<Index>(min_last, 0)));
  std::vector<double> m(last + 1);
  for (std::size_t k = 0; k <= last; ++k) m[k] = theta * std::exp(static_cast<double>(k) * log_q);
  return DiscreteDist(0, std::move(m), std::exp(static_cast<double>(last + 1) * log_q));
}

ExactDist bernoulli_exact(const Rational& p) {
  if (p < 0 || p > 1) throw InvalidInput("bernoulli: probability must lie in [0, 1]");
  return ExactDist(0, {1 - p, p});
}

ExactDist binomial_exact(int n, const Rational& p) {
  if (n < 0) throw InvalidInput("binomial: n must be non-negative");
  if (p < 0 || p > 1) throw InvalidInput("binomial: probability must lie in [0, 1]");
  std::vector<Rational> m(static_cast<std::size_t>(n) + 1);
  const Rational q = 1 - p;
  for (int k = 0; k <= n; ++k) {
    m[static_cast<std::size_t>(k)] = Rational(binomial_coefficient(n, k)) * pow(p, static_cast<unsigned>(k)) *
                                     pow(q, static_cast<unsigned>(n - k));
  }
  return ExactDist(0, std::move(m));
}

TvInterval tv_distance(const DiscreteDist& mu, const DiscreteDist& nu) {
  const Index first = std::min(mu.offset(), nu.offset());
  const Index last = std::max(mu.last(), nu.last());
  CompensatedSum t;
  for (Index k = first; k <= last; ++k) {
    const double d = nu.at(k) - mu.at(k);
    if (d > 0.0) t.add(d);
  }
  const double v = t.value();
  return {std::max(0.0, v - mu.tail_deficit()), v + mu.tail_deficit() + nu.tail_deficit()};
}

Interval<Rational> tv_distance(const ExactDist& mu, const ExactDist& nu) {
  const Index first = std::min(mu.offset(), nu.offset());
  const Index last = std::max(mu.last(), nu.last());
  Rational t = 0;
  for (Index k = first; k <= last; ++k) {
    const Rational d = nu.at(k) - mu.at(k);
    if (d > 0) t += d;
  }
  Rational lo = t - mu.tail_deficit();
  if (lo < 0) lo = 0;
  return {lo, t + mu.tail_deficit() + nu.tail_deficit()};
}

DiscreteDist convolve(const DiscreteDist& x, const DiscreteDist& y) {
  const std::size_t n = x.size() + y.size() - 1;
  std::vector<DoubleDouble> acc(n);
  const auto xm = x.masses();
  const auto ym = y.masses();
  for (std::size_t i = 0; i < xm.size(); ++i) {
    if (xm[i] == 0.0) continue;
    for (std::size_t j = 0; j < ym.size(); ++j) acc[i + j] += DoubleDouble::two_prod(xm[i], ym[j]);
  }
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = acc[k].value();
  return DiscreteDist(x.offset() + y.offset(), std::move(out), x.tail_deficit() + y.tail_deficit());
}

ExactDist convolve(const ExactDist& x, const ExactDist& y) {
  const std::size_t n = x.size() + y.size() - 1;
  std::vector<Rational> out(n);
  const auto xm = x.masses();
  const auto ym = y.masses();
  for (std::size_t i = 0; i < xm.size(); ++i) {
    if (xm[i] == 0) continue;
    for (std::size_t j = 0; j < ym.size(); ++j) out[i + j] += xm[i] * ym[j];
  }
  return ExactDist(x.offset() + y.offset(), std::move(out), x.tail_deficit() + y.tail_deficit());
}

}  // namespace rlc
