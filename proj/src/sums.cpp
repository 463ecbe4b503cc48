#include "rlc/sums.hpp"

#include <cmath>
#include <sstream>

namespace rlc {

BernoulliVector::BernoulliVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw InvalidInput("bernoulli vector must be non-empty");
  for (double x : p_) {
    if (!(x >= 0.0 && x < 1.0)) throw InvalidInput("success probabilities must lie in [0, 1)");
  }
}

bool BernoulliVector::all_equal() const {
  return std::all_of(p_.begin(), p_.end(), [&](double x) { return x == p_.front(); });
}

MeanSummary summarize(const BernoulliVector& bv) {
  MeanSummary s;
  s.n = bv.size();
  const double n = static_cast<double>(s.n);
  CompensatedSum odds, log_inv_alpha;
  for (std::size_t i = 0; i < s.n; ++i) {
    odds.add(bv.odds(i));
    log_inv_alpha.add(-std::log1p(-bv.p()[i]));
  }
  s.lambda = odds.value();
  s.r = s.lambda / n;
  s.m = 1.0 + s.r;
  s.g = std::exp(log_inv_alpha.value() / n);
  return s;
}

DiscreteDist poisson_binomial_pmf(const BernoulliVector& bv) {
  const std::size_t n = bv.size();
  std::vector<DoubleDouble> pmf(n + 1);
  pmf[0] = {1.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double p = bv.p()[i];
    const double a = bv.alpha(i);
    for (std::size_t k = i + 1; k > 0; --k) {
      DoubleDouble v = pmf[k] * a;
      v += pmf[k - 1] * p;
      pmf[k] = v;
    }
    pmf[0] = pmf[0] * a;
  }
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = std::max(0.0, pmf[k].value());
  return DiscreteDist(0, std::move(out));
}

namespace {

void check_exact(std::span<const Rational> p) {
  if (p.empty()) throw InvalidInput("bernoulli vector must be non-empty");
  for (const Rational& x : p) {
    if (x < 0 || x >= 1) throw InvalidInput("success probabilities must lie in [0, 1)");
  }
}

Rational exact_m(std::span<const Rational> p) {
  Rational s = 0;
  for (const Rational& x : p) s += 1 / (1 - x);
  return s / static_cast<long>(p.size());
}

}  // namespace

ExactDist poisson_binomial_pmf_exact(std::span<const Rational> p) {
  check_exact(p);
  ExactDist out = ExactDist::point_mass(0);
  for (const Rational& x : p) out = convolve(out, bernoulli_exact(x));
  return out;
}

DiscreteDist binomial_target(const BernoulliVector& bv) {
  const MeanSummary s = summarize(bv);
  // 1 - 1/m = r / (1 + r), free of cancellation for small r.
  return family_binomial(static_cast<int>(s.n), s.r / (1.0 + s.r));
}

ExactDist binomial_target_exact(std::span<const Rational> p) {
  check_exact(p);
  return binomial_exact(static_cast<int>(p.size()), 1 - 1 / exact_m(p));
}

double binomial_bound_primary(const BernoulliVector& bv) {
  if (bv.all_equal()) return 0.0;
  const std::size_t n = bv.size();
  const MeanSummary s = summarize(bv);
  // log (m/g)^n = n log m + sum log alpha_i >= 0 by AM-GM.
  CompensatedSum l;
  l.add(static_cast<double>(n) * std::log1p(s.r));
  for (std::size_t i = 0; i < n; ++i) l.add(std::log1p(-bv.p()[i]));
  const double log_ratio = std::max(0.0, l.value());
  return std::min(std::expm1(log_ratio), -std::expm1(-log_ratio));
}

Rational binomial_bound_primary_exact(std::span<const Rational> p) {
  check_exact(p);
  Rational ratio = pow(exact_m(p), static_cast<unsigned>(p.size()));
  for (const Rational& x : p) ratio *= 1 - x;
  const Rational up = ratio - 1;
  const Rational down = 1 - 1 / ratio;
  return std::min(up, down);
}

double binomial_bound_secondary(const BernoulliVector& bv, bool proof_tight) {
  const std::size_t n = bv.size();
  const double nn = static_cast<double>(n);
  const double r = summarize(bv).r;
  CompensatedSum dev, cubes, total;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = bv.odds(i);
    dev.add((x - r) * (x - r));
    cubes.add(x * x * x);
    total.add(x);
  }
  const double exponent = proof_tight ? 0.5 * dev.value() + std::pow(total.value(), 3) / (3.0 * nn * nn)
                                      : dev.value() + cubes.value() / (3.0 * nn * nn);
  return std::expm1(exponent);
}

DiscreteDist poisson_target(const BernoulliVector& bv, double tail_budget) {
  return family_poisson(summarize(bv).lambda, tail_budget, static_cast<Index>(bv.size()));
}

double poisson_bound(const BernoulliVector& bv) {
  CompensatedSum s;
  for (std::size_t i = 0; i < bv.size(); ++i) s.add(bv.odds(i) * bv.odds(i));
  return std::expm1(s.value());
}

namespace {

void add_summary(BoundReport& report, const MeanSummary& s) {
  report.set_parameter("n", static_cast<double>(s.n));
  report.set_parameter("m_n", s.m);
  report.set_parameter("g_n", s.g);
  report.set_parameter("r_n", s.r);
  report.set_parameter("lambda_n", s.lambda);
}

}  // namespace

BoundReport binomial_report(const BernoulliVector& bv, const SumsOptions& opts) {
  const MeanSummary s = summarize(bv);
  BoundReport report = certify(binomial_target(bv), poisson_binomial_pmf(bv), Index{0}, opts.certify);
  report.kind = "pb-binomial";
  add_summary(report, s);
  report.set_parameter("p", s.r / (1.0 + s.r));
  report.closed_forms.push_back(named_bound("primary", binomial_bound_primary(bv)));
  report.closed_forms.push_back(named_bound(opts.proof_tight ? "secondary_proof_tight" : "secondary",
                                            binomial_bound_secondary(bv, opts.proof_tight)));
  report.attach_oracle(*report.oracle_tv);
  return report;
}

BoundReport poisson_report(const BernoulliVector& bv, const SumsOptions& opts) {
  const MeanSummary s = summarize(bv);
  BoundReport report =
      certify(poisson_target(bv, opts.tail_budget), poisson_binomial_pmf(bv), Index{0}, opts.certify);
  report.kind = "pb-poisson";
  add_summary(report, s);
  report.closed_forms.push_back(named_bound("poisson", poisson_bound(bv)));
  report.attach_oracle(*report.oracle_tv);
  return report;
}

BoundReport geometric_sum_bound(std::span<const DiscreteDist> xis, const SumsOptions& opts) {
  if (xis.empty()) throw InvalidInput("sum-geometric: at least one summand is required");
  BoundReport report;
  report.kind = "sum-geometric";
  report.notes.push_back("requires n (m_n - 1) < 1; m_n > 1 + 1/n alone gives a negative geometric parameter");

  CompensatedSum lambda;
  bool all_bernoulli = true;
  for (std::size_t i = 0; i < xis.size(); ++i) {
    const DiscreteDist& xi = xis[i];
    if (xi.support() && xi.support()->first < 0) {
      throw InvalidInput("sum-geometric: summands must live on the non-negative integers");
    }
    const double alpha = xi.at(0);
    if (!(alpha > 0.0)) throw InvalidInput("sum-geometric: P[xi_i = 0] must be positive");
    const auto cert = is_log_concave(xi, opts.certify.certificate_slack);
    if (!cert.holds) {
      std::ostringstream why;
      why << "summand " << i << " is not log-concave";
      if (cert.first_violation) why << " (violation at k = " << *cert.first_violation << ")";
      report.hypothesis = cert;
      report.not_applicable = why.str();
      return report;
    }
    if (xi.support()->second > 1) all_bernoulli = false;
    lambda.add((1.0 - alpha) / alpha);
  }
  const double n = static_cast<double>(xis.size());
  const double lam = lambda.value();
  report.set_parameter("n", n);
  report.set_parameter("m_n", 1.0 + lam / n);
  report.set_parameter("lambda_n", lam);
  if (!(lam < 1.0)) {
    report.not_applicable = "n (m_n - 1) >= 1; no valid geometric parameter";
    return report;
  }

  DiscreteDist sum = DiscreteDist::point_mass(0);
  for (const DiscreteDist& xi : xis) sum = convolve(sum, xi);
  sum = sum.trimmed();
  const double theta = 1.0 - lam;
  const DiscreteDist target = family_geometric(theta, opts.tail_budget, sum.last());

  BoundReport cert = certify(target, sum, Index{0}, opts.certify);
  cert.kind = report.kind;
  cert.notes.insert(cert.notes.begin(), report.notes.begin(), report.notes.end());
  cert.parameters = report.parameters;
  cert.set_parameter("theta", theta);
  const NamedBound closed = named_bound("geometric_sum", lam / (1.0 - lam), all_bernoulli);
  if (!all_bernoulli) cert.notes.push_back("non-Bernoulli summands: anchor 0 is not ratio-matched, closed form not asserted");
  cert.closed_forms.push_back(closed);
  if (cert.oracle_tv) cert.attach_oracle(*cert.oracle_tv);
  return cert;
}

}  // namespace rlc
