#include "rlc/compound.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rlc {

namespace {

constexpr std::size_t kMaxAtoms = 2'000'000;

void validate_law_on_naturals(const DiscreteDist& d, const char* what) {
  if (d.offset() < 0) throw InvalidInput(std::string(what) + " must live on the non-negative integers");
  if (d.tail_deficit() != 0.0) throw InvalidInput(std::string(what) + " must be finitely supported");
  const double total = d.total_mass();
  if (std::fabs(total - 1.0) > 1e-12 * static_cast<double>(d.size())) {
    throw InvalidInput(std::string(what) + " must sum to one");
  }
}

bool is_point_mass_at_zero(const DiscreteDist& d) {
  const auto s = d.support();
  return s && s->first == 0 && s->second == 0;
}

LogConcavityCertificate certify_count_law(const DiscreteDist& d, double slack) { return is_log_concave(d, slack); }

std::string violation_message(const std::string& what, const LogConcavityCertificate& cert) {
  std::ostringstream os;
  os << what << " is not log-concave";
  if (cert.first_violation) os << " (violation at k = " << *cert.first_violation << ")";
  return os.str();
}

void finish(BoundReport& cert, BoundReport& header) {
  cert.kind = header.kind;
  cert.notes.insert(cert.notes.begin(), header.notes.begin(), header.notes.end());
  for (auto& p : header.parameters) cert.set_parameter(p.name, p.value, p.exact);
}

}  // namespace

void CompoundPoissonSpec::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("compound poisson: lambda must be positive");
  validate_law_on_naturals(severity, "compound poisson: severity");
}

void CompoundGeometricSpec::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("compound geometric: p must lie in (0, 1)");
  validate_law_on_naturals(count, "compound geometric: count law");
}

DiscreteDist compound_poisson_pmf(const CompoundPoissonSpec& spec, double tail_budget) {
  spec.validate();
  if (!(tail_budget > 0.0 && tail_budget < 1.0)) throw InvalidInput("tail budget must lie in (0, 1)");
  const DiscreteDist& f = spec.severity;
  const double rate = spec.lambda * (1.0 - f.at(0));
  if (rate > 700.0) throw InvalidInput("compound poisson: lambda (1 - F_0) > 700, P[X = 0] underflows");
  std::vector<double> out{std::exp(-rate)};
  CompensatedSum total;
  total.add(out[0]);
  const Index f_last = f.last();
  while (1.0 - total.value() > tail_budget) {
    if (out.size() >= kMaxAtoms) throw InvalidInput("compound poisson: window exceeds the atom limit");
    const Index k = static_cast<Index>(out.size());
    DoubleDouble acc;
    for (Index j = std::max<Index>(1, f.offset()); j <= std::min(k, f_last); ++j) {
      const double fj = f.at(j);
      if (fj == 0.0) continue;
      acc += DoubleDouble::two_prod(static_cast<double>(j) * fj, out[static_cast<std::size_t>(k - j)]);
    }
    const double pk = acc.value() * spec.lambda / static_cast<double>(k);
    out.push_back(pk);
    total.add(pk);
  }
  const double tail = std::max(0.0, 1.0 - total.value());
  return DiscreteDist(0, std::move(out), tail);
}

LogConcavityCertificate yu_check(const CompoundPoissonSpec& spec, double slack) {
  spec.validate();
  const auto fcert = certify_count_law(spec.severity, slack);
  if (!fcert.holds) throw NotApplicable(violation_message("severity", fcert));
  LogConcavityCertificate cert;
  if (is_point_mass_at_zero(spec.severity)) {
    cert.holds = cert.support_is_interval = true;
    return cert;
  }
  const double f1 = spec.severity.at(1);
  const double f2 = spec.severity.at(2);
  if (!(f1 > 0.0)) {
    cert.first_violation = 1;
    return cert;
  }
  cert.support_is_interval = true;
  const double lhs = spec.lambda * f1 * f1;
  const double rhs = 2.0 * f2;
  if (lhs + slack * std::max(lhs, rhs) < rhs) {
    cert.first_violation = 1;
    return cert;
  }
  cert.holds = true;
  return cert;
}

std::pair<double, double> compound_geometric_atoms(const CompoundGeometricSpec& spec) {
  spec.validate();
  const double log_q = std::log1p(-spec.p);
  CompensatedSum p0, p1;
  for (std::size_t i = 0; i < spec.count.size(); ++i) {
    const double fk = spec.count.masses()[i];
    if (fk == 0.0) continue;
    const double k = static_cast<double>(spec.count.offset() + static_cast<Index>(i));
    const double w = fk * std::exp(k * log_q);
    p0.add(w);
    p1.add(k * spec.p * w);
  }
  return {p0.value(), p1.value()};
}

DiscreteDist compound_geometric_pmf(const CompoundGeometricSpec& spec, double tail_budget) {
  spec.validate();
  if (!(tail_budget > 0.0 && tail_budget < 1.0)) throw InvalidInput("tail budget must lie in (0, 1)");
  const DiscreteDist& f = spec.count;
  const double log_p = std::log(spec.p);
  const double log_q = std::log1p(-spec.p);

  // log of C(j + k - 1, j) (1 - p)^k p^j for each k >= 1, advanced in j.
  std::vector<double> log_term;
  std::vector<double> weight;
  std::vector<double> k_of;
  double zero_mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double fk = f.masses()[i];
    if (fk == 0.0) continue;
    const Index k = f.offset() + static_cast<Index>(i);
    if (k == 0) {
      zero_mass = fk;
      continue;
    }
    log_term.push_back(static_cast<double>(k) * log_q);
    weight.push_back(fk);
    k_of.push_back(static_cast<double>(k));
  }

  const double total_count = f.total_mass();
  std::vector<double> out;
  CompensatedSum total;
  for (std::size_t j = 0;; ++j) {
    if (j >= kMaxAtoms) throw InvalidInput("compound geometric: window exceeds the atom limit");
    CompensatedSum pj;
    if (j == 0) pj.add(zero_mass);
    for (std::size_t t = 0; t < log_term.size(); ++t) {
      pj.add(weight[t] * std::exp(log_term[t]));
      log_term[t] += log_p + std::log((static_cast<double>(j) + k_of[t]) / static_cast<double>(j + 1));
    }
    out.push_back(pj.value());
    total.add(out.back());
    if (total_count - total.value() <= tail_budget) break;
  }
  return DiscreteDist(0, std::move(out), std::max(0.0, 1.0 - total.value()));
}

BoundReport geometric_bound_compound_poisson(const CompoundPoissonSpec& spec, const CompoundOptions& opts) {
  spec.validate();
  BoundReport header;
  header.kind = "compound-poisson";
  const double f0 = spec.severity.at(0);
  const double f1 = spec.severity.at(1);
  const double rate = spec.lambda * (1.0 - f0);
  const double ratio = spec.lambda * f1;
  header.set_parameter("lambda", spec.lambda);
  header.set_parameter("F_0", f0);
  header.set_parameter("F_1", f1);
  header.set_parameter("F_2", spec.severity.at(2));
  header.set_parameter("ratio", ratio);

  LogConcavityCertificate yu;
  try {
    yu = yu_check(spec, opts.certify.certificate_slack);
  } catch (const NotApplicable& e) {
    header.not_applicable = e.what();
    return header;
  }
  header.hypothesis = yu;
  if (!yu.holds) {
    header.not_applicable = "lambda F_1^2 < 2 F_2: X is not log-concave";
    return header;
  }
  if (!(ratio < 1.0)) {
    header.not_applicable = "lambda F_1 >= 1: no valid geometric parameter";
    return header;
  }

  const DiscreteDist nu = compound_poisson_pmf(spec, opts.tail_budget);
  const double theta = 1.0 - ratio;
  const DiscreteDist target = family_geometric(theta, opts.tail_budget, nu.last());
  BoundReport report = certify(target, nu, Index{0}, opts.certify);
  finish(report, header);
  report.set_parameter("theta", theta);

  // nu_0 / mu_0 = exp(-rate) / (1 - ratio)
  const double log_q_over_p = -rate - std::log1p(-ratio);
  const double atoms = std::min(std::expm1(log_q_over_p), -std::expm1(-log_q_over_p));
  report.closed_forms.push_back(named_bound("anchored", std::max(0.0, atoms)));
  report.closed_forms.push_back(named_bound("exp_mass", std::expm1(rate)));
  report.closed_forms.push_back(named_bound("inverted_ratio", std::exp(rate) * (1.0 - ratio) - 1.0, false));
  if (report.oracle_tv) report.attach_oracle(*report.oracle_tv);
  return report;
}

BoundReport geometric_bound_compound_geometric(const CompoundGeometricSpec& spec, const CompoundOptions& opts) {
  spec.validate();
  BoundReport header;
  header.kind = "compound-geometric";
  const double f1 = spec.count.at(1);
  header.set_parameter("p", spec.p);
  header.set_parameter("F_1", f1);
  header.notes.push_back("summand law P[xi = j] = (1 - p) p^j");

  const auto fcert = certify_count_law(spec.count, opts.certify.certificate_slack);
  if (!fcert.holds) {
    header.hypothesis = fcert;
    header.not_applicable = violation_message("count law", fcert);
    return header;
  }
  const auto [p0, p1] = compound_geometric_atoms(spec);
  const double rho = p1 / p0;
  header.set_parameter("P_0", p0);
  header.set_parameter("P_1", p1);
  header.set_parameter("rho", rho);
  if (!(rho < 1.0)) {
    header.not_applicable = "P[X = 1] / P[X = 0] >= 1: no valid geometric parameter";
    return header;
  }

  const DiscreteDist nu = compound_geometric_pmf(spec, opts.tail_budget);
  const double theta = 1.0 - rho;
  const DiscreteDist target = family_geometric(theta, opts.tail_budget, nu.last());
  BoundReport report = certify(target, nu, Index{0}, opts.certify);
  finish(report, header);
  report.set_parameter("theta", theta);

  const double closed = f1 > 0.0 ? std::pow(1.0 + (1.0 - f1) / (spec.p * (1.0 - spec.p)), 2) / f1 - 1.0
                                 : std::numeric_limits<double>::infinity();
  report.closed_forms.push_back(named_bound("count_ratio", closed, false));
  if (report.oracle_tv) report.attach_oracle(*report.oracle_tv);
  return report;
}

}  // namespace rlc
