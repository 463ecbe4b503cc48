#pragma once

// Independence profiles of matroids and the binomial and Poisson
// approximations of the induced law nu_M[k] proportional to I(k).

#include "rlc/relbound.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rlc {

/// Counts I(0..n) of independent sets by cardinality.
class IndepProfile {
 public:
  /// Validates I(0) = 1 and positive counts exactly on {0..rank}.
  explicit IndepProfile(std::vector<BigInt> counts);

  int n() const noexcept { return static_cast<int>(counts_.size()) - 1; }
  int rank() const noexcept { return rank_; }
  const std::vector<BigInt>& counts() const noexcept { return counts_; }
  const BigInt& operator[](int k) const { return counts_.at(static_cast<std::size_t>(k)); }
  /// Sum of I(k) over k >= 1, or over k >= 0 with include_zero.
  BigInt total(bool include_zero) const;

  friend bool operator==(const IndepProfile&, const IndepProfile&) = default;

 private:
  std::vector<BigInt> counts_;
  int rank_ = 0;
};

struct PartitionMatroidSpec {
  std::vector<int> sizes;
  std::vector<int> capacities;

  int n() const;
  /// Throws InvalidInput unless sizes are positive and 0 <= d_i <= c_i.
  void validate() const;
};

/// Explicit family of independent sets over a ground set {0..n-1}, n <= 20.
struct SetSystem {
  int n = 0;
  std::vector<std::uint32_t> sets;

  static SetSystem from_lists(int n, const std::vector<std::vector<int>>& lists);
};

IndepProfile profile_uniform(int n, int r);
IndepProfile profile_partition(const PartitionMatroidSpec& spec);
/// Verifies the hereditary and exchange axioms exhaustively; throws
/// MatroidAxiomError naming a violating pair of sets.
IndepProfile profile_from_set_system(const SetSystem& sys);

/// I(k)^2 k (n - k) >= I(k-1) I(k+1) (k + 1)(n - k + 1) in exact integers.
LogConcavityCertificate mason_check(const IndepProfile& prof);

/// nu[k] = I(k) / total on the window {0..n}; nu[0] = 0 unless include_zero.
ExactDist nu_distribution_exact(const IndepProfile& prof, bool include_zero = false);
DiscreteDist nu_distribution(const IndepProfile& prof, bool include_zero = false);

struct MatroidOptions {
  bool include_zero = false;
  double tail_budget = kDefaultTailBudget;
  CertifyOptions certify;
};

/// Exact data behind the binomial approximation anchored at m.
struct MatroidBinomialExact {
  Rational p;
  /// nu[m] / gamma[m] - 1 and 1 - gamma[m] / nu[m]
  Rational upper;
  Rational lower;
  Interval<Rational> tv;
  ExactDist nu;
  ExactDist gamma;
};

/// gamma = Binomial(n, p) with p = (1 + ((n - m)/(m + 1)) I(m)/I(m+1))^-1.
MatroidBinomialExact matroid_binomial_exact(const IndepProfile& prof, int m, bool include_zero = false);
BoundReport matroid_binomial_bound(const IndepProfile& prof, int m, const MatroidOptions& opts = {});

/// gamma = Poisson(lambda) with lambda = (m + 1) I(m+1)/I(m); closed form
/// m! e^lambda I(m) / (lambda^m total) - 1.
BoundReport matroid_poisson_bound(const IndepProfile& prof, int m, const MatroidOptions& opts = {});

/// Number of dependent subsets, 2^n - sum_{k>=0} I(k).
BigInt dependent_count(const IndepProfile& prof);
/// (1 - 2^-n D)^-1 - 1 against Binomial(n, 1/2). Requires every capacity >= 2.
double partition_half_bound(const PartitionMatroidSpec& spec);
/// 2^(2 - (1 - eps) n) for the uniform matroid of rank k; requires
/// k >= n - eps n / log2(n) + 1, eps in (0, 1) and (1 - eps) n >= 1.
double uniform_rare_bound(int n, int k, double eps);
/// Report for partition_half_bound with the oracle TV against
/// Binomial(n, 1/2); adds uniform_rare_bound when eps is given and the
/// spec is a single category.
BoundReport partition_half_report(const PartitionMatroidSpec& spec, std::optional<double> eps = std::nullopt);

}  // namespace rlc
