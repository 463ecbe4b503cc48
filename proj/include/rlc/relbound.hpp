#pragma once

// Total-variation bounds between mu and nu when nu is log-concave relative to
// mu, anchored at a pair (ell, ell + 1) of consecutive atoms of nu.

#include "rlc/dist.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rlc {

struct Anchor {
  Index ell = 0;
  bool ratio_matched = false;
  /// |p_{ell+1} q_ell - q_{ell+1} p_ell|
  double ratio_gap = 0.0;
  friend bool operator==(const Anchor&, const Anchor&) = default;
};

/// A closed-form bound from a corollary, kept raw (it may exceed 1).
/// `asserted` marks bounds the library guarantees to dominate the oracle.
struct NamedBound {
  std::string name;
  double raw = 0.0;
  bool asserted = true;
  std::optional<bool> dominates;

  double clamped() const { return std::clamp(raw, 0.0, 1.0); }
  friend bool operator==(const NamedBound&, const NamedBound&) = default;
};

inline NamedBound named_bound(std::string name, double raw, bool asserted = true) {
  NamedBound b;
  b.name = std::move(name);
  b.raw = raw;
  b.asserted = asserted;
  return b;
}

struct Parameter {
  std::string name;
  double value = 0.0;
  /// Exact rational rendering when one exists, e.g. "2/5".
  std::string exact;
  friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct BoundReport {
  std::string kind;
  /// Distance the bounds and oracle refer to: "tv" or "kolmogorov".
  std::string metric = "tv";
  LogConcavityCertificate hypothesis;
  std::optional<Anchor> anchor;
  std::optional<double> bound_nu_side;
  std::optional<double> bound_mu_side;
  std::optional<double> simplified;
  /// Oracle distance interval, in `metric`.
  std::optional<TvInterval> oracle_tv;
  /// The approximated law (nu) and the reference (mu), when discrete.
  std::optional<DiscreteDist> law;
  std::optional<DiscreteDist> target;
  std::optional<bool> dominated;
  std::vector<NamedBound> closed_forms;
  std::vector<Parameter> parameters;
  std::vector<std::string> notes;
  /// Set when the theorem does not apply; carries the reason.
  std::optional<std::string> not_applicable;

  bool applicable() const { return !not_applicable.has_value(); }
  /// Smallest anchored value present (integral bounds and simplified form).
  std::optional<double> best_bound() const;
  const Parameter* parameter(const std::string& name) const;
  const NamedBound* closed_form(const std::string& name) const;
  void set_parameter(std::string name, double value, std::string exact = {});

  /// Fills oracle_tv and the dominance verdicts (theorem bounds and closed forms).
  void attach_oracle(const TvInterval& tv);

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

struct CertifyOptions {
  double certificate_slack = kCertificateSlack;
  /// Relative tolerance for declaring an anchor ratio-matched.
  double ratio_tolerance = 1e-12;
};

/// Both integral bounds at anchor ell: {B_nu, B_mu}, clamped to [0, 1].
///
/// B_nu = sum_y (1 - (p_l/q_l) r^(y-l))_+ nu_y and
/// B_mu = sum_y ((q_l/p_l) r^-(y-l) - 1)_+ mu_y with r = p_{l+1} q_l / (p_l q_{l+1}),
/// summed over the stored windows. Throws NotApplicable when nu is not
/// log-concave relative to mu, the support of mu is not an interval, or
/// q_l q_{l+1} = 0.
std::pair<double, double> theorem1_bounds(const DiscreteDist& mu, const DiscreteDist& nu, Index ell,
                                          const CertifyOptions& opts = {});

/// min(q_l/p_l - 1, 1 - p_l/q_l) at a ratio-matched anchor.
/// Throws NotApplicable if the anchor is not matched or q_l < p_l.
double theorem1_simplified(const DiscreteDist& mu, const DiscreteDist& nu, Index ell,
                           const CertifyOptions& opts = {});

/// Anchor evaluation at a fixed ell (no search).
Anchor make_anchor(const DiscreteDist& mu, const DiscreteDist& nu, Index ell, double ratio_tolerance = 1e-12);

/// Scans consecutive atoms of nu for a sign change of p_{l+1} q_l - q_{l+1} p_l
/// and returns the candidate with the smallest normalized gap (ties: smaller l).
std::optional<Anchor> find_ratio_anchor(const DiscreteDist& mu, const DiscreteDist& nu,
                                        double ratio_tolerance = 1e-12);

/// Hypothesis check, anchor search (when ell is absent), both bounds, the
/// simplified form when matched, the oracle TV and the dominance verdict.
/// Hypothesis failures are reported, not thrown.
BoundReport certify(const DiscreteDist& mu, const DiscreteDist& nu, std::optional<Index> ell = std::nullopt,
                    const CertifyOptions& opts = {});

}  // namespace rlc
