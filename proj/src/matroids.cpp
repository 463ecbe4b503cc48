#include "rlc/matroids.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace rlc {

IndepProfile::IndepProfile(std::vector<BigInt> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw InvalidInput("profile needs I(0)");
  if (counts_[0] != 1) throw InvalidInput("profile must have I(0) = 1");
  std::size_t k = 0;
  while (k + 1 < counts_.size() && counts_[k + 1] > 0) ++k;
  rank_ = static_cast<int>(k);
  for (std::size_t j = k + 1; j < counts_.size(); ++j) {
    if (counts_[j] != 0) throw InvalidInput("profile counts must be positive exactly up to the rank");
  }
  for (const BigInt& c : counts_) {
    if (c < 0) throw InvalidInput("profile counts must be non-negative");
  }
}

BigInt IndepProfile::total(bool include_zero) const {
  BigInt s = 0;
  for (std::size_t k = include_zero ? 0 : 1; k < counts_.size(); ++k) s += counts_[k];
  return s;
}

int PartitionMatroidSpec::n() const {
  int n = 0;
  for (int c : sizes) n += c;
  return n;
}

void PartitionMatroidSpec::validate() const {
  if (sizes.empty() || sizes.size() != capacities.size()) {
    throw InvalidInput("partition spec needs one capacity per category");
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] <= 0) throw InvalidInput("category sizes must be positive");
    if (capacities[i] < 0 || capacities[i] > sizes[i]) throw InvalidInput("capacities must satisfy 0 <= d_i <= c_i");
  }
}

SetSystem SetSystem::from_lists(int n, const std::vector<std::vector<int>>& lists) {
  if (n < 0 || n > 20) throw InvalidInput("ground set size must lie in [0, 20]");
  SetSystem sys;
  sys.n = n;
  for (const auto& list : lists) {
    std::uint32_t mask = 0;
    for (int x : list) {
      if (x < 0 || x >= n) throw InvalidInput("set element out of range: " + std::to_string(x));
      mask |= 1u << x;
    }
    sys.sets.push_back(mask);
  }
  return sys;
}

IndepProfile profile_uniform(int n, int r) {
  if (n < 0 || r < 0 || r > n) throw InvalidInput("uniform matroid needs 0 <= r <= n");
  std::vector<BigInt> c(static_cast<std::size_t>(n) + 1, 0);
  for (int k = 0; k <= r; ++k) c[static_cast<std::size_t>(k)] = binomial_coefficient(n, k);
  return IndepProfile(std::move(c));
}

IndepProfile profile_partition(const PartitionMatroidSpec& spec) {
  spec.validate();
  std::vector<BigInt> poly{1};
  for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
    std::vector<BigInt> next(poly.size() + static_cast<std::size_t>(spec.sizes[i]), 0);
    for (std::size_t a = 0; a < poly.size(); ++a) {
      for (int j = 0; j <= spec.capacities[i]; ++j) {
        next[a + static_cast<std::size_t>(j)] += poly[a] * binomial_coefficient(spec.sizes[i], j);
      }
    }
    poly = std::move(next);
  }
  return IndepProfile(std::move(poly));
}

namespace {

std::string set_string(std::uint32_t mask) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int x = 0; mask >> x; ++x) {
    if (mask >> x & 1u) {
      os << (first ? "" : ",") << x;
      first = false;
    }
  }
  os << '}';
  return os.str();
}

}  // namespace

IndepProfile profile_from_set_system(const SetSystem& sys) {
  if (sys.n < 0 || sys.n > 20) throw InvalidInput("ground set size must lie in [0, 20]");
  if (sys.sets.empty()) throw MatroidAxiomError("family of independent sets must be non-empty");
  const std::uint32_t full = (1u << sys.n) - 1u;
  const std::size_t space = std::size_t{1} << sys.n;
  std::vector<char> indep(space, 0);
  for (std::uint32_t s : sys.sets) {
    if (s & ~full) throw InvalidInput("set outside the ground set");
    indep[s] = 1;
  }
  // Hereditary: removing one element from an independent set stays independent.
  for (std::size_t s = 0; s < space; ++s) {
    if (!indep[s]) continue;
    for (std::uint32_t rest = static_cast<std::uint32_t>(s); rest; rest &= rest - 1) {
      const std::uint32_t sub = static_cast<std::uint32_t>(s) & ~(rest & -rest);
      if (!indep[sub]) {
        throw MatroidAxiomError("hereditary axiom fails: " + set_string(static_cast<std::uint32_t>(s)) +
                                " is independent but " + set_string(sub) + " is not");
      }
    }
  }
  // best[S]: a largest independent subset of S.
  std::vector<std::uint32_t> best(space, 0);
  for (std::size_t s = 1; s < space; ++s) {
    if (indep[s]) {
      best[s] = static_cast<std::uint32_t>(s);
      continue;
    }
    std::uint32_t b = 0;
    for (std::uint32_t rest = static_cast<std::uint32_t>(s); rest; rest &= rest - 1) {
      const std::uint32_t cand = best[static_cast<std::uint32_t>(s) & ~(rest & -rest)];
      if (std::popcount(cand) > std::popcount(b)) b = cand;
    }
    best[s] = b;
  }
  // Exchange: I independent has an augmentation from every larger T iff no
  // independent set of size |I| + 1 fits inside I plus its blocked elements.
  std::vector<BigInt> counts(static_cast<std::size_t>(sys.n) + 1, 0);
  for (std::size_t s = 0; s < space; ++s) {
    if (!indep[s]) continue;
    const auto set = static_cast<std::uint32_t>(s);
    ++counts[static_cast<std::size_t>(std::popcount(set))];
    std::uint32_t closure = set;
    for (std::uint32_t rest = full & ~set; rest; rest &= rest - 1) {
      const std::uint32_t x = rest & -rest;
      if (!indep[set | x]) closure |= x;
    }
    std::uint32_t big = best[closure];
    if (std::popcount(big) > std::popcount(set)) {
      while (std::popcount(big) > std::popcount(set) + 1) big &= big - 1;
      throw MatroidAxiomError("exchange axiom fails: no element of " + set_string(big) + " augments " +
                              set_string(set));
    }
  }
  if (counts[0] != 1) throw MatroidAxiomError("family must contain the empty set");
  return IndepProfile(std::move(counts));
}

LogConcavityCertificate mason_check(const IndepProfile& prof) {
  return is_ulc<BigInt>(prof.counts(), prof.n());
}

ExactDist nu_distribution_exact(const IndepProfile& prof, bool include_zero) {
  const BigInt total = prof.total(include_zero);
  if (total == 0) throw InvalidInput("matroid law needs rank >= 1 when the empty set is excluded");
  std::vector<Rational> m(prof.counts().size());
  for (std::size_t k = include_zero ? 0 : 1; k < m.size(); ++k) m[k] = Rational(prof.counts()[k], total);
  return ExactDist(0, std::move(m));
}

DiscreteDist nu_distribution(const IndepProfile& prof, bool include_zero) {
  return to_double(nu_distribution_exact(prof, include_zero));
}

namespace {

void check_anchor(const IndepProfile& prof, int m) {
  if (m < 0 || m >= prof.n()) throw InvalidInput("anchor m must satisfy 0 <= m <= n - 1");
  if (prof[m + 1] == 0) throw NotApplicable("I(m + 1) = 0: anchor m must be below the rank");
}

}  // namespace

MatroidBinomialExact matroid_binomial_exact(const IndepProfile& prof, int m, bool include_zero) {
  check_anchor(prof, m);
  const int n = prof.n();
  const Rational odds_inv = Rational(n - m, m + 1) * Rational(prof[m], prof[m + 1]);
  MatroidBinomialExact out{1 / (1 + odds_inv), 0, 0, {0, 0}, nu_distribution_exact(prof, include_zero),
                           ExactDist::point_mass(0)};
  out.gamma = binomial_exact(n, out.p);
  const Rational q = out.nu.at(m);
  const Rational g = out.gamma.at(m);
  out.upper = q / g - 1;
  out.lower = q == 0 ? Rational(-1) : 1 - g / q;
  out.tv = tv_distance(out.gamma, out.nu);
  return out;
}

BoundReport matroid_binomial_bound(const IndepProfile& prof, int m, const MatroidOptions& opts) {
  const MatroidBinomialExact ex = matroid_binomial_exact(prof, m, opts.include_zero);
  BoundReport report = certify(to_double(ex.gamma), to_double(ex.nu), Index{m}, opts.certify);
  report.kind = "matroid-binomial";
  report.set_parameter("n", prof.n());
  report.set_parameter("m", m);
  report.set_parameter("p", to_double(ex.p), to_string(ex.p));
  const bool forward = ex.nu.at(m) >= ex.gamma.at(m) && ex.nu.at(m) > 0;
  report.closed_forms.push_back(named_bound("upper", to_double(ex.upper), forward));
  report.closed_forms.push_back(named_bound("lower", to_double(ex.lower), forward));
  report.notes.push_back(std::string("normalization over k >= ") + (opts.include_zero ? "0" : "1"));
  report.notes.push_back("exact oracle TV " + to_string(ex.tv.hi));
  report.attach_oracle({to_double(ex.tv.lo), to_double(ex.tv.hi)});
  return report;
}

BoundReport matroid_poisson_bound(const IndepProfile& prof, int m, const MatroidOptions& opts) {
  check_anchor(prof, m);
  const Rational lambda_exact = Rational(m + 1) * Rational(prof[m + 1], prof[m]);
  const double lambda = to_double(lambda_exact);
  const DiscreteDist nu = nu_distribution(prof, opts.include_zero);
  BoundReport report = certify(family_poisson(lambda, opts.tail_budget, prof.n()), nu, Index{m}, opts.certify);
  report.kind = "matroid-poisson";
  report.set_parameter("n", prof.n());
  report.set_parameter("m", m);
  report.set_parameter("lambda", lambda, to_string(lambda_exact));
  // m! e^lambda I(m) / (lambda^m total) - 1, in log space.
  const double log_value = std::lgamma(m + 1.0) + lambda + std::log(to_double(prof[m])) -
                           static_cast<double>(m) * std::log(lambda) -
                           std::log(to_double(prof.total(opts.include_zero)));
  const bool forward = nu.at(m) > 0 && report.applicable() && nu.at(m) >= report.target->at(m);
  report.closed_forms.push_back(named_bound("poisson", std::expm1(log_value), forward));
  report.notes.push_back(std::string("normalization over k >= ") + (opts.include_zero ? "0" : "1"));
  report.attach_oracle(*report.oracle_tv);
  return report;
}

BigInt dependent_count(const IndepProfile& prof) {
  return (BigInt(1) << prof.n()) - prof.total(true);
}

double partition_half_bound(const PartitionMatroidSpec& spec) {
  spec.validate();
  for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
    if (std::min(spec.sizes[i], spec.capacities[i]) < 2) {
      throw NotApplicable("every category needs min(c_i, d_i) >= 2");
    }
  }
  const IndepProfile prof = profile_partition(spec);
  const BigInt pow2 = BigInt(1) << prof.n();
  // (1 - D / 2^n)^-1 - 1 = D / (2^n - D)
  return to_double(Rational(dependent_count(prof), pow2 - dependent_count(prof)));
}

double uniform_rare_bound(int n, int k, double eps) {
  if (n < 2 || k < 0 || k > n) throw InvalidInput("uniform matroid needs n >= 2 and 0 <= k <= n");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("eps must lie in (0, 1)");
  if ((1.0 - eps) * n < 1.0) throw NotApplicable("(1 - eps) n >= 1 fails");
  if (static_cast<double>(k) < n - eps * n / std::log2(static_cast<double>(n)) + 1.0) {
    throw NotApplicable("k >= n - eps n / log2(n) + 1 fails");
  }
  return std::exp2(2.0 - (1.0 - eps) * n);
}

BoundReport partition_half_report(const PartitionMatroidSpec& spec, std::optional<double> eps) {
  const double half = partition_half_bound(spec);
  const IndepProfile prof = profile_partition(spec);
  const int n = prof.n();
  const ExactDist nu = nu_distribution_exact(prof, true);
  const ExactDist rho = binomial_exact(n, Rational(1, 2));
  BoundReport report = certify(to_double(rho), to_double(nu), Index{1});
  report.kind = "matroid-half";
  report.set_parameter("n", n);
  report.set_parameter("dependent_sets", to_double(dependent_count(prof)), dependent_count(prof).str());
  report.closed_forms.push_back(named_bound("half", half));
  if (eps) {
    if (spec.sizes.size() != 1) throw InvalidInput("the eps bound applies to uniform matroids only");
    report.set_parameter("eps", *eps);
    report.closed_forms.push_back(named_bound("rare", uniform_rare_bound(n, spec.capacities[0], *eps)));
  }
  report.notes.push_back("normalization over k >= 0");
  const auto tv = tv_distance(rho, nu);
  report.notes.push_back("exact oracle TV " + to_string(tv.hi));
  report.attach_oracle({to_double(tv.lo), to_double(tv.hi)});
  return report;
}

}  // namespace rlc
