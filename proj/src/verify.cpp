#include "rlc/verify.hpp"

#include "json_tree.hpp"
#include "rlc/compound.hpp"
#include "rlc/continuous.hpp"
#include "rlc/intrinsic_volumes.hpp"
#include "rlc/matroids.hpp"
#include "rlc/sums.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <thread>

namespace rlc {

namespace {

using detail::Json;
using Rng = std::mt19937_64;

struct Instance {
  Json inputs;
  std::vector<BoundReport> reports;
};

using Generator = std::function<Instance(Rng&)>;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Masses proportional to base_k e^(-V_k) for a random convex V with V_0 = 0.
std::vector<double> tilt_convex(Rng& rng, const std::vector<double>& base, double spread) {
  std::normal_distribution<double> normal(0.0, spread);
  std::vector<double> slopes(base.size() > 1 ? base.size() - 1 : 0);
  for (double& s : slopes) s = normal(rng);
  std::sort(slopes.begin(), slopes.end());
  std::vector<double> logs(base.size());
  double v = 0.0;
  for (std::size_t k = 0; k < base.size(); ++k) {
    if (k > 0) v += slopes[k - 1];
    logs[k] = std::log(base[k]) - v;
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> out(base.size());
  double total = 0.0;
  for (std::size_t k = 0; k < base.size(); ++k) total += out[k] = std::exp(logs[k] - top);
  for (double& m : out) m /= total;
  return out;
}

Instance dominance_instance(Rng& rng) {
  const int len = uniform_int(rng, 2, 60);
  const Index offset = uniform_int(rng, -10, 10);
  std::vector<double> base(static_cast<std::size_t>(len));
  double total = 0.0;
  for (double& m : base) total += m = uniform(rng, 0.05, 1.0);
  for (double& m : base) m /= total;
  const DiscreteDist mu(offset, base);
  const DiscreteDist nu(offset, tilt_convex(rng, base, uniform(rng, 0.05, 1.5)));
  return {{{"mu", detail::dist_tree(mu)}, {"nu", detail::dist_tree(nu)}}, {certify(mu, nu)}};
}

Instance poisson_binomial_instance(Rng& rng) {
  std::vector<double> p(static_cast<std::size_t>(uniform_int(rng, 1, 40)));
  const double top = uniform(rng, 0.01, 0.6);
  for (double& x : p) x = uniform(rng, 0.0, top);
  const BernoulliVector bv(p);
  return {{{"p", p}}, {binomial_report(bv), poisson_report(bv)}};
}

Instance matroid_instance(Rng& rng) {
  PartitionMatroidSpec spec;
  const int k = uniform_int(rng, 1, 4);
  for (int i = 0; i < k; ++i) {
    const int c = uniform_int(rng, 1, 4);
    spec.sizes.push_back(c);
    spec.capacities.push_back(uniform_int(rng, 0, c));
  }
  const IndepProfile prof = profile_partition(spec);
  const int m = prof.rank() >= 2 ? uniform_int(rng, 1, prof.rank() - 1) : 0;
  return {{{"sizes", spec.sizes}, {"capacities", spec.capacities}, {"m", m}},
          {matroid_binomial_bound(prof, m), matroid_poisson_bound(prof, m)}};
}

Instance iv_instance(Rng& rng) {
  std::vector<double> sides(static_cast<std::size_t>(uniform_int(rng, 1, 6)));
  for (double& s : sides) s = uniform(rng, 0.01, 1.5);
  const int m = uniform_int(rng, 0, static_cast<int>(sides.size()) - 1);
  return {{{"sides", sides}, {"m", m}}, {poisson_iv_bound(iv_box(sides), m)}};
}

Instance compound_instance(Rng& rng) {
  const int len = uniform_int(rng, 2, 5);
  CompoundPoissonSpec spec;
  spec.lambda = uniform(rng, 0.05, 3.0);
  spec.severity = DiscreteDist(0, tilt_convex(rng, std::vector<double>(static_cast<std::size_t>(len), 1.0), 1.5));
  return {{{"lambda", spec.lambda}, {"severity", detail::dist_tree(spec.severity)}},
          {geometric_bound_compound_poisson(spec)}};
}

Instance gamma_instance(Rng& rng) {
  const GammaParams a{uniform(rng, 0.3, 5.0), uniform(rng, 0.3, 5.0)};
  const GammaParams b{uniform(rng, 0.3, 5.0), uniform(rng, 0.3, 5.0)};
  return {{{"a", {a.kappa, a.lambda}}, {"b", {b.kappa, b.lambda}}}, {gamma_bound_case_i(a, b)}};
}

const std::map<std::string, Generator>& generators() {
  static const std::map<std::string, Generator> table{
      {"dominance", dominance_instance}, {"poisson-binomial", poisson_binomial_instance},
      {"matroid", matroid_instance},     {"iv", iv_instance},
      {"compound", compound_instance},   {"gamma", gamma_instance}};
  return table;
}

Rng instance_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

// Smallest margin between the dominance-checked bounds and the upper oracle TV.
std::optional<double> slack(const BoundReport& r) {
  if (!r.oracle_tv) return std::nullopt;
  std::optional<double> low = r.best_bound();
  for (const auto& b : r.closed_forms) {
    if (b.asserted && (!low || b.raw < *low)) low = b.raw;
  }
  if (!low) return std::nullopt;
  return *low - r.oracle_tv->hi;
}

}  // namespace

std::vector<std::string> sweep_suites() {
  return {"dominance", "poisson-binomial", "matroid", "iv", "compound", "gamma"};
}

SweepReport run_sweep(const SweepConfig& config) {
  const auto it = generators().find(config.suite);
  if (it == generators().end()) throw InvalidInput("unknown suite: " + config.suite);
  const Generator& gen = it->second;

  std::vector<Instance> results(config.instances);
  std::vector<std::exception_ptr> errors(config.instances);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t i = next++; i < config.instances; i = next++) {
      Rng rng = instance_rng(config.seed, i);
      try {
        results[i] = gen(rng);
      } catch (const NotApplicable&) {
        results[i].inputs = nullptr;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(config.instances, 1)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepReport out;
  out.suite = config.suite;
  out.seed = config.seed;
  out.instances = config.instances;
  for (std::uint64_t i = 0; i < config.instances; ++i) {
    bool any = false, failed = false;
    for (const auto& r : results[i].reports) {
      if (!r.applicable()) continue;
      any = true;
      if (const auto s = slack(r); s && (!out.worst_slack || *s < *out.worst_slack)) out.worst_slack = s;
      if (r.dominated != std::optional<bool>(true)) {
        failed = true;
        out.dominance_failures.push_back(SweepFailure{i, detail::canonical(results[i].inputs), r});
      }
    }
    if (!any) {
      ++out.not_applicable;
    } else if (!failed) {
      ++out.passes;
    }
  }
  return out;
}

}  // namespace rlc
