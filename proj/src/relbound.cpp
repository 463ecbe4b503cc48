#include "rlc/relbound.hpp"

#include <cmath>
#include <limits>

namespace rlc {

std::optional<double> BoundReport::best_bound() const {
  std::optional<double> best;
  for (const auto& b : {bound_nu_side, bound_mu_side, simplified}) {
    if (b && (!best || *b < *best)) best = *b;
  }
  return best;
}

const Parameter* BoundReport::parameter(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const NamedBound* BoundReport::closed_form(const std::string& name) const {
  for (const auto& b : closed_forms) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

void BoundReport::set_parameter(std::string name, double value, std::string exact) {
  for (auto& p : parameters) {
    if (p.name == name) {
      p.value = value;
      p.exact = std::move(exact);
      return;
    }
  }
  parameters.push_back({std::move(name), value, std::move(exact)});
}

void BoundReport::attach_oracle(const TvInterval& tv) {
  oracle_tv = tv;
  std::optional<bool> verdict;
  if (const auto best = best_bound()) verdict = tv.hi <= *best + kDominanceSlack;
  for (auto& cf : closed_forms) {
    cf.dominates = tv.hi <= cf.raw + kDominanceSlack;
    if (cf.asserted) verdict = verdict.value_or(true) && *cf.dominates;
  }
  dominated = verdict;
}

namespace {

struct AnchorMasses {
  double p0, p1, q0, q1;
};

AnchorMasses masses_at(const DiscreteDist& mu, const DiscreteDist& nu, Index ell) {
  return {mu.at(ell), mu.at(ell + 1), nu.at(ell), nu.at(ell + 1)};
}

// Normalized signed gap (p1 q0 - q1 p0) / max(p1 q0, q1 p0).
long double normalized_gap(const AnchorMasses& m) {
  const long double a = static_cast<long double>(m.p1) * m.q0;
  const long double b = static_cast<long double>(m.q1) * m.p0;
  const long double scale = std::max(a, b);
  return scale > 0 ? (a - b) / scale : 0.0L;
}

void require_hypothesis(const DiscreteDist& mu, const DiscreteDist& nu, double slack) {
  const auto cert = is_log_concave_relative(nu, mu, slack);
  if (!cert.holds) throw NotApplicable("nu is not log-concave relative to mu");
  if (!mu.support_is_interval()) throw NotApplicable("support of mu is not an interval");
}

void require_anchor(const DiscreteDist& nu, Index ell) {
  if (!(nu.at(ell) > 0.0 && nu.at(ell + 1) > 0.0)) {
    throw NotApplicable("invalid anchor: q_l q_{l+1} = 0 at l = " + std::to_string(ell));
  }
}

std::pair<double, double> integral_bounds(const DiscreteDist& mu, const DiscreteDist& nu, Index ell) {
  const auto m = masses_at(mu, nu, ell);
  const double log_r = std::log(m.p1) + std::log(m.q0) - std::log(m.p0) - std::log(m.q1);
  const double log_a = std::log(m.p0) - std::log(m.q0);

  CompensatedSum nu_side;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const double q = nu.masses()[i];
    if (q <= 0.0) continue;
    const double dy = static_cast<double>(nu.offset() + static_cast<Index>(i) - ell);
    const double t = -std::expm1(log_a + dy * log_r);
    if (t > 0.0) nu_side.add(t * q);
  }
  CompensatedSum mu_side;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double p = mu.masses()[i];
    if (p <= 0.0) continue;
    const double dy = static_cast<double>(mu.offset() + static_cast<Index>(i) - ell);
    const double t = std::expm1(-log_a - dy * log_r);
    if (t > 0.0) mu_side.add(t * p);
  }
  auto clamp01 = [](double v) { return std::isnan(v) ? 1.0 : std::clamp(v, 0.0, 1.0); };
  return {clamp01(nu_side.value()), clamp01(mu_side.value())};
}

double simplified_value(const AnchorMasses& m) {
  const double up = m.q0 / m.p0 - 1.0;
  const double down = 1.0 - m.p0 / m.q0;
  return std::clamp(std::min(up, down), 0.0, 1.0);
}

}  // namespace

Anchor make_anchor(const DiscreteDist& mu, const DiscreteDist& nu, Index ell, double ratio_tolerance) {
  const auto m = masses_at(mu, nu, ell);
  const long double a = static_cast<long double>(m.p1) * m.q0;
  const long double b = static_cast<long double>(m.q1) * m.p0;
  Anchor out;
  out.ell = ell;
  out.ratio_gap = static_cast<double>(std::fabs(a - b));
  out.ratio_matched = std::fabs(a - b) <= static_cast<long double>(ratio_tolerance) * std::max(a, b);
  return out;
}

std::pair<double, double> theorem1_bounds(const DiscreteDist& mu, const DiscreteDist& nu, Index ell,
                                          const CertifyOptions& opts) {
  require_hypothesis(mu, nu, opts.certificate_slack);
  require_anchor(nu, ell);
  return integral_bounds(mu, nu, ell);
}

double theorem1_simplified(const DiscreteDist& mu, const DiscreteDist& nu, Index ell, const CertifyOptions& opts) {
  require_hypothesis(mu, nu, opts.certificate_slack);
  require_anchor(nu, ell);
  const Anchor a = make_anchor(mu, nu, ell, opts.ratio_tolerance);
  if (!a.ratio_matched) throw NotApplicable("anchor is not ratio-matched");
  const auto m = masses_at(mu, nu, ell);
  if (m.q0 < m.p0 * (1.0 - opts.ratio_tolerance)) {
    throw NotApplicable("ratio-matched anchor with q_l < p_l contradicts relative log-concavity");
  }
  return simplified_value(m);
}

std::optional<Anchor> find_ratio_anchor(const DiscreteDist& mu, const DiscreteDist& nu, double ratio_tolerance) {
  const auto supp = nu.support();
  if (!supp) return std::nullopt;
  std::optional<Index> best;
  long double best_gap = 0;
  std::optional<long double> prev_gap;
  auto consider = [&](Index ell, long double g) {
    if (!best || std::fabs(g) < best_gap || (std::fabs(g) == best_gap && ell < *best)) {
      best = ell;
      best_gap = std::fabs(g);
    }
  };
  for (Index ell = supp->first; ell < supp->second; ++ell) {
    const auto m = masses_at(mu, nu, ell);
    if (!(m.q0 > 0 && m.q1 > 0 && m.p0 > 0 && m.p1 > 0)) {
      prev_gap.reset();
      continue;
    }
    const long double g = normalized_gap(m);
    if (std::fabs(g) <= ratio_tolerance) consider(ell, g);
    if (prev_gap && ((*prev_gap < 0 && g > 0) || (*prev_gap > 0 && g < 0))) {
      consider(ell - 1, *prev_gap);
      consider(ell, g);
    }
    prev_gap = g;
  }
  if (!best) return std::nullopt;
  return make_anchor(mu, nu, *best, ratio_tolerance);
}

BoundReport certify(const DiscreteDist& mu, const DiscreteDist& nu, std::optional<Index> ell,
                    const CertifyOptions& opts) {
  BoundReport report;
  report.kind = "anchored";
  report.law = nu;
  report.target = mu;
  try {
    report.hypothesis = is_log_concave_relative(nu, mu, opts.certificate_slack);
  } catch (const AbsoluteContinuityError& e) {
    report.not_applicable = e.what();
    report.attach_oracle(tv_distance(mu, nu));
    return report;
  }
  const TvInterval tv = tv_distance(mu, nu);
  if (!report.hypothesis.holds) {
    report.not_applicable = report.hypothesis.support_is_interval
                                ? "nu is not log-concave relative to mu (violation at k = " +
                                      std::to_string(*report.hypothesis.first_violation) + ")"
                                : "support of nu is not an interval";
    report.attach_oracle(tv);
    return report;
  }
  if (!mu.support_is_interval()) {
    report.not_applicable = "support of mu is not an interval";
    report.attach_oracle(tv);
    return report;
  }

  const auto supp = nu.support();
  if (supp->first == supp->second) {
    // A single atom admits no anchor with q_l q_{l+1} > 0.
    if (tv.hi == 0.0) {
      report.anchor = Anchor{supp->first, true, 0.0};
      report.bound_nu_side = report.bound_mu_side = report.simplified = 0.0;
      report.notes.push_back("identical point masses; all bounds are zero");
    } else {
      report.not_applicable = "nu is a point mass; no anchor with q_l q_{l+1} > 0";
    }
    report.attach_oracle(tv);
    return report;
  }

  Anchor anchor;
  if (ell) {
    if (!(nu.at(*ell) > 0.0 && nu.at(*ell + 1) > 0.0)) {
      report.not_applicable = "invalid anchor: q_l q_{l+1} = 0 at l = " + std::to_string(*ell);
      report.attach_oracle(tv);
      return report;
    }
    anchor = make_anchor(mu, nu, *ell, opts.ratio_tolerance);
  } else if (auto found = find_ratio_anchor(mu, nu, opts.ratio_tolerance)) {
    anchor = *found;
  } else {
    // No sign change: any anchor is valid; take the smallest normalized gap.
    std::optional<std::pair<long double, Index>> best;
    for (Index l = supp->first; l < supp->second; ++l) {
      const long double g = std::fabs(normalized_gap(masses_at(mu, nu, l)));
      if (!best || g < best->first) best.emplace(g, l);
    }
    anchor = make_anchor(mu, nu, best->second, opts.ratio_tolerance);
    report.notes.push_back("no ratio-matched anchor; using the smallest ratio gap");
  }
  report.anchor = anchor;

  const auto [b_nu, b_mu] = integral_bounds(mu, nu, anchor.ell);
  report.bound_nu_side = b_nu;
  report.bound_mu_side = b_mu;
  if (anchor.ratio_matched) {
    const auto m = masses_at(mu, nu, anchor.ell);
    if (m.q0 >= m.p0 * (1.0 - opts.ratio_tolerance)) {
      report.simplified = simplified_value(m);
    } else {
      report.notes.push_back("ratio-matched anchor has q_l < p_l; simplified form omitted");
    }
  }
  report.attach_oracle(tv);
  return report;
}

}  // namespace rlc
