#include "rlc/rlc.h"

#include "../json_tree.hpp"
#include "rlc/compound.hpp"
#include "rlc/continuous.hpp"
#include "rlc/intrinsic_volumes.hpp"
#include "rlc/matroids.hpp"
#include "rlc/sums.hpp"
#include "rlc/verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <optional>
#include <string>
#include <vector>

using rlc::detail::Json;

struct rlc_result {
  Json document;
  std::vector<rlc::BoundReport> reports;
  std::optional<rlc::SweepReport> sweep;
};

namespace {

thread_local std::string last_error;

rlc::CertifyOptions certify_options(const rlc_options& o) {
  rlc::CertifyOptions c;
  c.certificate_slack = o.certificate_slack;
  return c;
}

rlc_options resolve(const rlc_options* options) {
  rlc_options o;
  rlc_options_init(&o);
  if (options) o = *options;
  if (!(o.tail_budget > 0.0 && o.tail_budget < 1.0)) throw rlc::InvalidInput("tail budget must lie in (0, 1)");
  if (!(o.certificate_slack >= 0.0 && o.certificate_slack < 1.0)) {
    throw rlc::InvalidInput("certificate slack must lie in [0, 1)");
  }
  return o;
}

Json integer_text(const rlc::BigInt& v) {
  if (v <= std::numeric_limits<std::int64_t>::max()) return v.convert_to<std::int64_t>();
  return v.str();
}

// A command document: its inputs, its reports and any extra fields.
struct Builder {
  rlc_result result;

  Builder(const char* command, Json inputs) {
    result.document = {{"command", command}, {"inputs", std::move(inputs)}};
  }
  Builder& add(rlc::BoundReport r) {
    result.reports.push_back(std::move(r));
    return *this;
  }
  Builder& set(const char* key, Json value) {
    result.document[key] = std::move(value);
    return *this;
  }
  rlc_status finish(rlc_result** out) {
    Json reports = Json::array();
    bool any = false;
    for (const auto& r : result.reports) {
      reports.push_back(rlc::detail::report_tree(r));
      any = any || r.applicable();
    }
    result.document["reports"] = std::move(reports);
    *out = new rlc_result(std::move(result));
    if (any) return RLC_OK;
    last_error = (*out)->reports.empty() || !(*out)->reports.front().not_applicable
                     ? "no bound applies"
                     : *(*out)->reports.front().not_applicable;
    return RLC_NOT_APPLICABLE;
  }
};

// Runs body; maps exceptions to status codes. A thrown NotApplicable becomes a
// result holding one not-applicable report of the given kind.
template <class Body>
rlc_status guarded(const char* kind, Json inputs, rlc_result** out, Body body) {
  if (!out) {
    last_error = "output handle pointer is null";
    return RLC_INVALID_INPUT;
  }
  *out = nullptr;
  last_error.clear();
  try {
    Builder b(kind, inputs);
    try {
      return body(b);
    } catch (const rlc::NotApplicable& e) {
      Builder na(kind, b.result.document["inputs"]);
      rlc::BoundReport r;
      r.kind = kind;
      r.not_applicable = e.what();
      return na.add(std::move(r)).finish(out);
    }
  } catch (const rlc::InvalidInput& e) {
    last_error = e.what();
    return RLC_INVALID_INPUT;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return RLC_INVALID_INPUT;
  } catch (const std::out_of_range& e) {
    last_error = e.what();
    return RLC_INVALID_INPUT;
  } catch (const Json::exception& e) {
    last_error = std::string("malformed input: ") + e.what();
    return RLC_INVALID_INPUT;
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return RLC_INTERNAL_ERROR;
  } catch (...) {
    last_error = "internal error";
    return RLC_INTERNAL_ERROR;
  }
}

std::vector<double> copy(const double* p, size_t n, const char* what) {
  if (n > 0 && !p) throw rlc::InvalidInput(std::string(what) + " pointer is null");
  return std::vector<double>(p, p + n);
}

std::string text(const char* s, const char* what) {
  if (!s) throw rlc::InvalidInput(std::string(what) + " is null");
  return s;
}

Json number_list(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(rlc::detail::number(x));
  return out;
}

rlc::SumsOptions sums_options(const rlc_options& o) {
  rlc::SumsOptions s;
  s.tail_budget = o.tail_budget;
  s.proof_tight = o.proof_tight != 0;
  s.certify = certify_options(o);
  return s;
}

rlc::MatroidOptions matroid_options(const rlc_options& o) {
  rlc::MatroidOptions m;
  m.include_zero = o.include_zero != 0;
  m.tail_budget = o.tail_budget;
  m.certify = certify_options(o);
  return m;
}

rlc_status matroid_common(Builder& b, const rlc::IndepProfile& prof, int m, const rlc_options& o,
                          rlc_result** out) {
  Json counts = Json::array();
  for (const auto& c : prof.counts()) counts.push_back(integer_text(c));
  b.set("profile", counts).set("rank", prof.rank()).set("mason", rlc::detail::certificate_tree(rlc::mason_check(prof)));
  if (m < 0 || m >= prof.n()) throw rlc::InvalidInput("anchor m must satisfy 0 <= m <= n - 1");
  b.add(rlc::matroid_binomial_bound(prof, m, matroid_options(o)));
  try {
    b.add(rlc::matroid_poisson_bound(prof, m, matroid_options(o)));
  } catch (const rlc::NotApplicable& e) {
    rlc::BoundReport r;
    r.kind = "matroid-poisson";
    r.not_applicable = e.what();
    b.add(std::move(r));
  }
  return b.finish(out);
}

rlc_status iv_common(Builder& b, const rlc::IVSequence& iv, int m, const rlc_options& o, rlc_result** out) {
  b.set("intrinsic_volumes", number_list(iv.V))
      .set("W", rlc::detail::number(iv.W))
      .set("z_dist", rlc::detail::dist_tree(rlc::z_dist(iv)))
      .set("ulc_n", rlc::detail::certificate_tree(rlc::is_ulc(std::span<const double>(iv.V), iv.n)))
      .set("ulc_infinity", rlc::detail::certificate_tree(rlc::is_ulc_infinity(std::span<const double>(iv.V))));
  b.add(rlc::poisson_iv_bound(iv, m, o.tail_budget));
  return b.finish(out);
}

rlc::ProductFactor factor_from_tree(const Json& f) {
  if (!f.is_object()) throw rlc::InvalidInput("each factor must be an object");
  const double scale = f.contains("scale") ? rlc::detail::read_number(f.at("scale")) : 1.0;
  if (f.contains("segment")) return rlc::ProductFactor::segment(rlc::detail::read_number(f.at("segment")));
  if (f.contains("box")) {
    std::vector<double> sides;
    for (const auto& s : f.at("box")) sides.push_back(rlc::detail::read_number(s));
    return rlc::ProductFactor::box(std::move(sides), scale);
  }
  if (!(scale > 0.0 && scale <= 1.0)) throw rlc::InvalidInput("factor scale must lie in (0, 1]");
  rlc::ProductFactor out;
  out.scale = scale;
  if (f.contains("cube")) {
    const Json& c = f.at("cube");
    if (!c.is_array() || c.size() != 2) throw rlc::InvalidInput("cube factor needs [n, side]");
    out.body = rlc::iv_cube(c[0].get<int>(), rlc::detail::read_number(c[1]));
  } else if (f.contains("ball")) {
    out.body = rlc::iv_ball(f.at("ball").get<int>());
  } else {
    throw rlc::InvalidInput("factor needs one of segment, box, cube, ball");
  }
  return out;
}

}  // namespace

extern "C" {

void rlc_options_init(rlc_options* options) {
  if (!options) return;
  options->tail_budget = rlc::kDefaultTailBudget;
  options->certificate_slack = rlc::kCertificateSlack;
  options->proof_tight = 0;
  options->include_zero = 0;
}

const char* rlc_version(void) { return RLC_VERSION; }

const char* rlc_last_error(void) { return last_error.c_str(); }

const char* rlc_status_name(rlc_status status) {
  switch (status) {
    case RLC_OK: return "ok";
    case RLC_INVALID_INPUT: return "invalid input";
    case RLC_NOT_APPLICABLE: return "not applicable";
    case RLC_SWEEP_FAILED: return "sweep failed";
    case RLC_INTERNAL_ERROR: return "internal error";
  }
  return "unknown";
}

rlc_status rlc_pb_binomial(const double* p, size_t n, const rlc_options* options, rlc_result** out) {
  return guarded("pb-binomial", Json::object(), out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    const auto ps = copy(p, n, "p");
    b.result.document["inputs"] = {{"p", number_list(ps)}};
    return b.add(rlc::binomial_report(rlc::BernoulliVector(ps), sums_options(o))).finish(out);
  });
}

rlc_status rlc_pb_poisson(const double* p, size_t n, const rlc_options* options, rlc_result** out) {
  return guarded("pb-poisson", Json::object(), out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    const auto ps = copy(p, n, "p");
    b.result.document["inputs"] = {{"p", number_list(ps)}};
    return b.add(rlc::poisson_report(rlc::BernoulliVector(ps), sums_options(o))).finish(out);
  });
}

rlc_status rlc_sum_geometric(const char* summands_json, const rlc_options* options, rlc_result** out) {
  return guarded("sum-geometric", Json::object(), out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    const Json j = rlc::detail::parse(text(summands_json, "summands"));
    if (!j.is_array() || j.empty()) throw rlc::InvalidInput("summands must be a non-empty JSON array");
    std::vector<rlc::DiscreteDist> xis;
    Json laws = Json::array();
    for (const auto& x : j) {
      xis.push_back(rlc::detail::dist_from_tree(x));
      laws.push_back(rlc::detail::dist_tree(xis.back()));
    }
    b.result.document["inputs"] = {{"summands", laws}};
    return b.add(rlc::geometric_sum_bound(xis, sums_options(o))).finish(out);
  });
}

rlc_status rlc_matroid_uniform(int n, int rank, int m, const rlc_options* options, rlc_result** out) {
  return guarded("matroid", Json{{"uniform", {n, rank}}, {"m", m}}, out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    return matroid_common(b, rlc::profile_uniform(n, rank), m, o, out);
  });
}

rlc_status rlc_matroid_partition(const int* sizes, const int* capacities, size_t categories, int m,
                                 const rlc_options* options, rlc_result** out) {
  return guarded("matroid", Json::object(), out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    if (categories == 0 || !sizes || !capacities) throw rlc::InvalidInput("partition needs at least one category");
    rlc::PartitionMatroidSpec spec;
    spec.sizes.assign(sizes, sizes + categories);
    spec.capacities.assign(capacities, capacities + categories);
    b.result.document["inputs"] = {{"sizes", spec.sizes}, {"capacities", spec.capacities}, {"m", m}};
    spec.validate();
    const auto prof = rlc::profile_partition(spec);
    if (std::all_of(spec.capacities.begin(), spec.capacities.end(), [](int c) { return c >= 2; })) {
      b.set("dependent_sets", integer_text(rlc::dependent_count(prof)));
      b.add(rlc::partition_half_report(spec));
    }
    return matroid_common(b, prof, m, o, out);
  });
}

rlc_status rlc_matroid_sets(const char* sets_json, int m, const rlc_options* options, rlc_result** out) {
  return guarded("matroid", Json::object(), out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    const Json j = rlc::detail::parse(text(sets_json, "sets"));
    const Json& lists = j.is_object() ? j.at("sets") : j;
    if (!lists.is_array()) throw rlc::InvalidInput("sets must be a JSON array of integer arrays");
    std::vector<std::vector<int>> sets;
    int n = 0;
    for (const auto& s : lists) {
      sets.push_back(s.get<std::vector<int>>());
      for (int x : sets.back()) n = std::max(n, x + 1);
    }
    if (j.is_object() && j.contains("n")) n = j.at("n").get<int>();
    b.result.document["inputs"] = {{"n", n}, {"sets", sets}, {"m", m}};
    return matroid_common(b, rlc::profile_from_set_system(rlc::SetSystem::from_lists(n, sets)), m, o, out);
  });
}

rlc_status rlc_iv_box(const double* sides, size_t n, int m, const rlc_options* options, rlc_result** out) {
  return guarded("iv", Json::object(), out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    const auto s = copy(sides, n, "sides");
    b.result.document["inputs"] = {{"box", number_list(s)}, {"m", m}};
    return iv_common(b, rlc::iv_box(s), m, o, out);
  });
}

rlc_status rlc_iv_cube(int n, double side, int m, const rlc_options* options, rlc_result** out) {
  return guarded("iv", Json{{"cube", {n, rlc::detail::number(side)}}, {"m", m}}, out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    return iv_common(b, rlc::iv_cube(n, side), m, o, out);
  });
}

rlc_status rlc_iv_ball(int n, int m, const rlc_options* options, rlc_result** out) {
  return guarded("iv", Json{{"ball", n}, {"m", m}}, out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    return iv_common(b, rlc::iv_ball(n), m, o, out);
  });
}

rlc_status rlc_iv_product(const char* factors_json, const rlc_options* options, rlc_result** out) {
  return guarded("iv", Json::object(), out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    const Json j = rlc::detail::parse(text(factors_json, "factors"));
    if (!j.is_array() || j.empty()) throw rlc::InvalidInput("product needs a non-empty JSON array of factors");
    std::vector<rlc::ProductFactor> factors;
    try {
      for (const auto& f : j) factors.push_back(factor_from_tree(f));
    } catch (const Json::exception& e) {
      throw rlc::InvalidInput(std::string("malformed factor: ") + e.what());
    }
    b.result.document["inputs"] = {{"product", j}};
    return b.add(rlc::product_report(factors, o.tail_budget)).finish(out);
  });
}

rlc_status rlc_compound_poisson(double lambda, const double* severity, size_t k, const rlc_options* options,
                                rlc_result** out) {
  return guarded("compound-poisson", Json::object(), out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    const auto f = copy(severity, k, "severity");
    if (f.empty()) throw rlc::InvalidInput("severity needs at least one mass");
    b.result.document["inputs"] = {{"lambda", rlc::detail::number(lambda)}, {"severity", number_list(f)}};
    rlc::CompoundPoissonSpec spec{lambda, rlc::DiscreteDist(0, f)};
    rlc::CompoundOptions co{o.tail_budget, certify_options(o)};
    return b.add(rlc::geometric_bound_compound_poisson(spec, co)).finish(out);
  });
}

rlc_status rlc_compound_geometric(const char* count_json, double p, const rlc_options* options, rlc_result** out) {
  return guarded("compound-geometric", Json::object(), out, [&](Builder& b) {
    const rlc_options o = resolve(options);
    rlc::CompoundGeometricSpec spec{rlc::detail::dist_from_tree(rlc::detail::parse(text(count_json, "count"))), p};
    b.result.document["inputs"] = {{"count", rlc::detail::dist_tree(spec.count)}, {"p", rlc::detail::number(p)}};
    rlc::CompoundOptions co{o.tail_budget, certify_options(o)};
    return b.add(rlc::geometric_bound_compound_geometric(spec, co)).finish(out);
  });
}

rlc_status rlc_gamma(double kappa1, double lambda1, double kappa2, double lambda2, int case_ii, double z,
                     const rlc_options* options, rlc_result** out) {
  Json inputs{{"a", {rlc::detail::number(kappa1), rlc::detail::number(lambda1)}},
              {"b", {rlc::detail::number(kappa2), rlc::detail::number(lambda2)}},
              {"case", case_ii ? "ii" : "i"}};
  if (case_ii) inputs["z"] = rlc::detail::number(z);
  return guarded(case_ii ? "gamma-ii" : "gamma-i", inputs, out, [&](Builder& b) {
    resolve(options);
    const rlc::GammaParams a{kappa1, lambda1}, c{kappa2, lambda2};
    a.validate();
    c.validate();
    b.set("crossings", number_list(rlc::gamma_crossings(a, c)));
    return b.add(case_ii ? rlc::gamma_bound_case_ii(a, c, z) : rlc::gamma_bound_case_i(a, c)).finish(out);
  });
}

rlc_status rlc_expapprox(const char* density, const rlc_options* options, rlc_result** out) {
  const std::string name = density ? density : "";
  return guarded("expapprox", Json{{"density", name}}, out, [&](Builder& b) {
    resolve(options);
    const rlc::DensityModel d = rlc::builtin_density(text(density, "density"));
    return b.add(rlc::exp_kolmogorov_bound(d)).finish(out);
  });
}

rlc_status rlc_verify(const char* suite, uint64_t instances, uint64_t seed, unsigned workers, rlc_result** out) {
  const std::string name = suite ? suite : "";
  return guarded("verify", Json::object(), out, [&](Builder&) {
    rlc::SweepReport sweep = rlc::run_sweep({text(suite, "suite"), instances, seed, workers});
    auto* r = new rlc_result;
    r->document = rlc::detail::sweep_tree(sweep);
    for (const auto& f : sweep.dominance_failures) r->reports.push_back(f.report);
    const bool failed = !sweep.dominance_failures.empty();
    r->sweep = std::move(sweep);
    *out = r;
    if (!failed) return RLC_OK;
    last_error = "dominance failures in suite " + name;
    return RLC_SWEEP_FAILED;
  });
}

rlc_status rlc_result_render(const rlc_result* result, rlc_format format, char** text_out) {
  if (!result || !text_out) {
    last_error = "null result or output pointer";
    return RLC_INVALID_INPUT;
  }
  std::string s;
  switch (format) {
    case RLC_FORMAT_JSON:
      s = rlc::detail::canonical(result->document);
      break;
    case RLC_FORMAT_CSV:
      s = result->sweep ? rlc::to_csv(*result->sweep) : rlc::to_csv(result->reports);
      break;
    case RLC_FORMAT_TABLE:
      s = result->sweep ? rlc::to_table(*result->sweep) : rlc::to_table(result->reports);
      break;
    default:
      last_error = "unknown format";
      return RLC_INVALID_INPUT;
  }
  *text_out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!*text_out) return RLC_INTERNAL_ERROR;
  std::memcpy(*text_out, s.c_str(), s.size() + 1);
  return RLC_OK;
}

void rlc_string_free(char* text_in) { std::free(text_in); }

void rlc_result_free(rlc_result* result) { delete result; }

size_t rlc_result_report_count(const rlc_result* result) { return result ? result->reports.size() : 0; }

rlc_status rlc_result_report_json(const rlc_result* result, size_t index, char** text_out) {
  if (!result || !text_out || index >= result->reports.size()) {
    last_error = "no such report";
    return RLC_INVALID_INPUT;
  }
  const std::string s = rlc::to_json(result->reports[index]);
  *text_out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!*text_out) return RLC_INTERNAL_ERROR;
  std::memcpy(*text_out, s.c_str(), s.size() + 1);
  return RLC_OK;
}

rlc_status rlc_result_value(const rlc_result* result, size_t index, const char* field, double* value) {
  if (!result || !field || !value || index >= result->reports.size()) {
    last_error = "no such report";
    return RLC_INVALID_INPUT;
  }
  const rlc::BoundReport& r = result->reports[index];
  const std::string f = field;
  std::optional<double> v;
  if (f == "best_bound") v = r.best_bound();
  else if (f == "bound_nu_side") v = r.bound_nu_side;
  else if (f == "bound_mu_side") v = r.bound_mu_side;
  else if (f == "simplified") v = r.simplified;
  else if (f == "oracle_lo" && r.oracle_tv) v = r.oracle_tv->lo;
  else if (f == "oracle_hi" && r.oracle_tv) v = r.oracle_tv->hi;
  else if (f.rfind("param:", 0) == 0) {
    if (const auto* p = r.parameter(f.substr(6))) v = p->value;
  } else if (f.rfind("closed_form:", 0) == 0) {
    if (const auto* b = r.closed_form(f.substr(12))) v = b->raw;
  }
  if (!v) {
    last_error = "field not present: " + f;
    return RLC_INVALID_INPUT;
  }
  *value = *v;
  return RLC_OK;
}

rlc_status rlc_result_flag(const rlc_result* result, size_t index, const char* field, int* value) {
  if (!result || !field || !value || index >= result->reports.size()) {
    last_error = "no such report";
    return RLC_INVALID_INPUT;
  }
  const rlc::BoundReport& r = result->reports[index];
  const std::string f = field;
  if (f == "applicable") {
    *value = r.applicable();
    return RLC_OK;
  }
  if (f == "dominated" && r.dominated) {
    *value = *r.dominated;
    return RLC_OK;
  }
  last_error = "field not present: " + f;
  return RLC_INVALID_INPUT;
}

}  // extern "C"
