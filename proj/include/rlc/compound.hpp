#pragma once

// Compound Poisson and compound geometric laws on the non-negative integers and
// their geometric approximations.

#include "rlc/relbound.hpp"

#include <utility>

namespace rlc {

/// X = xi_1 + ... + xi_N with N ~ Poisson(lambda) and xi_i ~ severity, i.i.d.
struct CompoundPoissonSpec {
  double lambda = 0.0;
  DiscreteDist severity = DiscreteDist::point_mass(0);

  /// Throws InvalidInput unless lambda > 0, the severity lives on the
  /// non-negative integers and sums to one.
  void validate() const;
};

/// X = xi_1 + ... + xi_N with N ~ count and P[xi = j] = (1 - p) p^j, i.i.d.
struct CompoundGeometricSpec {
  DiscreteDist count = DiscreteDist::point_mass(0);
  double p = 0.5;

  void validate() const;
};

/// Panjer recursion: P[X = 0] = exp(-lambda (1 - F_0)),
/// P[X = k] = (lambda / k) sum_{j=1..k} j F_j P[X = k - j], truncated once the
/// accumulated mass reaches 1 - tail_budget. Throws InvalidInput when
/// lambda (1 - F_0) > 700 (P[X = 0] underflows).
DiscreteDist compound_poisson_pmf(const CompoundPoissonSpec& spec, double tail_budget = kDefaultTailBudget);

/// Log-concavity of X via lambda F_1^2 >= 2 F_2. Requires a log-concave
/// severity (throws NotApplicable otherwise). A severity with F_1 = 0 other
/// than the point mass at 0 leaves a gap at 1 in the support of X and fails.
LogConcavityCertificate yu_check(const CompoundPoissonSpec& spec, double slack = kCertificateSlack);

/// Mixture of negative-binomial convolution powers, grown until the
/// accumulated mass reaches sum(count) - tail_budget.
DiscreteDist compound_geometric_pmf(const CompoundGeometricSpec& spec, double tail_budget = kDefaultTailBudget);

/// {P[X = 0], P[X = 1]} = {sum F_k (1 - p)^k, sum k F_k p (1 - p)^k}.
std::pair<double, double> compound_geometric_atoms(const CompoundGeometricSpec& spec);

struct CompoundOptions {
  double tail_budget = kDefaultTailBudget;
  CertifyOptions certify;
};

/// Geometric approximation with ratio lambda F_1 (theta = 1 - lambda F_1).
/// Needs a log-concave severity, lambda F_1^2 >= 2 F_2 and lambda F_1 < 1.
/// Closed forms: "anchored" from the exact atoms at 0, "exp_mass"
/// exp(lambda (1 - F_0)) - 1 (both asserted) and "inverted_ratio"
/// exp(lambda (1 - F_0)) (1 - lambda F_1) - 1 (not asserted).
BoundReport geometric_bound_compound_poisson(const CompoundPoissonSpec& spec, const CompoundOptions& opts = {});

/// Geometric approximation with ratio rho = P[X = 1] / P[X = 0] < 1 for a
/// log-concave count law. Closed form "count_ratio"
/// (1 / F_1)(1 + (1 - F_1) / (p (1 - p)))^2 - 1, not asserted.
BoundReport geometric_bound_compound_geometric(const CompoundGeometricSpec& spec, const CompoundOptions& opts = {});

}  // namespace rlc
