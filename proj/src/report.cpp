#include "json_tree.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rlc {

namespace detail {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw InvalidInput("expected a number, got " + j.dump());
}

namespace {

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

std::optional<double> read_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return read_number(j.at(key));
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field: ") + key);
  return j.at(key);
}

void write(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(k).dump();
        out += ':';
        write(v, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

}  // namespace

Json dist_tree(const DiscreteDist& d) {
  Json masses = Json::array();
  for (double m : d.masses()) masses.push_back(number(m));
  return {{"offset", d.offset()}, {"masses", masses}, {"tail_deficit", number(d.tail_deficit())}};
}

DiscreteDist dist_from_tree(const Json& j) {
  std::vector<double> masses;
  const Json* arr = &j;
  Index offset = 0;
  double tail = 0.0;
  if (j.is_object()) {
    arr = &field(j, "masses");
    if (j.contains("offset")) {
      if (!j.at("offset").is_number_integer()) throw InvalidInput("offset must be an integer");
      offset = j.at("offset").get<Index>();
    }
    if (j.contains("tail_deficit")) tail = read_number(j.at("tail_deficit"));
  }
  if (!arr->is_array()) throw InvalidInput("masses must be an array");
  for (const auto& m : *arr) masses.push_back(read_number(m));
  return DiscreteDist(offset, std::move(masses), tail);
}

Json certificate_tree(const LogConcavityCertificate& c) {
  return {{"holds", c.holds},
          {"first_violation", c.first_violation ? Json(*c.first_violation) : Json(nullptr)},
          {"support_is_interval", c.support_is_interval}};
}

Json report_tree(const BoundReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["metric"] = r.metric;
  j["hypothesis"] = certificate_tree(r.hypothesis);
  j["anchor"] = r.anchor ? Json{{"ell", r.anchor->ell},
                                {"ratio_matched", r.anchor->ratio_matched},
                                {"ratio_gap", number(r.anchor->ratio_gap)}}
                         : Json(nullptr);
  j["bound_nu_side"] = optional_number(r.bound_nu_side);
  j["bound_mu_side"] = optional_number(r.bound_mu_side);
  j["simplified"] = optional_number(r.simplified);
  j["best_bound"] = optional_number(r.best_bound());
  j["oracle_tv"] = r.oracle_tv ? Json{{"lo", number(r.oracle_tv->lo)}, {"hi", number(r.oracle_tv->hi)}}
                               : Json(nullptr);
  j["law"] = r.law ? dist_tree(*r.law) : Json(nullptr);
  j["target"] = r.target ? dist_tree(*r.target) : Json(nullptr);
  j["dominated"] = r.dominated ? Json(*r.dominated) : Json(nullptr);
  j["applicable"] = r.applicable();
  Json forms = Json::array();
  for (const auto& b : r.closed_forms) {
    forms.push_back({{"name", b.name},
                     {"raw", number(b.raw)},
                     {"clamped", number(b.clamped())},
                     {"asserted", b.asserted},
                     {"dominates", b.dominates ? Json(*b.dominates) : Json(nullptr)}});
  }
  j["closed_forms"] = forms;
  Json params = Json::array();
  for (const auto& p : r.parameters) {
    params.push_back({{"name", p.name}, {"value", number(p.value)}, {"exact", p.exact}});
  }
  j["parameters"] = params;
  j["notes"] = r.notes;
  j["not_applicable"] = r.not_applicable ? Json(*r.not_applicable) : Json(nullptr);
  return j;
}

BoundReport report_from_tree(const Json& j) {
  BoundReport r;
  r.kind = field(j, "kind").get<std::string>();
  r.metric = field(j, "metric").get<std::string>();
  const Json& h = field(j, "hypothesis");
  r.hypothesis.holds = field(h, "holds").get<bool>();
  r.hypothesis.support_is_interval = field(h, "support_is_interval").get<bool>();
  if (!field(h, "first_violation").is_null()) r.hypothesis.first_violation = h.at("first_violation").get<Index>();
  if (const Json& a = field(j, "anchor"); !a.is_null()) {
    r.anchor = Anchor{field(a, "ell").get<Index>(), field(a, "ratio_matched").get<bool>(),
                      read_number(field(a, "ratio_gap"))};
  }
  r.bound_nu_side = read_optional(j, "bound_nu_side");
  r.bound_mu_side = read_optional(j, "bound_mu_side");
  r.simplified = read_optional(j, "simplified");
  if (const Json& o = field(j, "oracle_tv"); !o.is_null()) {
    r.oracle_tv = TvInterval{read_number(field(o, "lo")), read_number(field(o, "hi"))};
  }
  if (const Json& d = field(j, "law"); !d.is_null()) r.law = dist_from_tree(d);
  if (const Json& d = field(j, "target"); !d.is_null()) r.target = dist_from_tree(d);
  if (const Json& d = field(j, "dominated"); !d.is_null()) r.dominated = d.get<bool>();
  for (const auto& b : field(j, "closed_forms")) {
    NamedBound nb = named_bound(field(b, "name").get<std::string>(), read_number(field(b, "raw")),
                                field(b, "asserted").get<bool>());
    if (!field(b, "dominates").is_null()) nb.dominates = b.at("dominates").get<bool>();
    r.closed_forms.push_back(std::move(nb));
  }
  for (const auto& p : field(j, "parameters")) {
    r.parameters.push_back(Parameter{field(p, "name").get<std::string>(), read_number(field(p, "value")),
                                     field(p, "exact").get<std::string>()});
  }
  r.notes = field(j, "notes").get<std::vector<std::string>>();
  if (const Json& n = field(j, "not_applicable"); !n.is_null()) r.not_applicable = n.get<std::string>();
  return r;
}

Json sweep_tree(const SweepReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.dominance_failures) {
    failures.push_back({{"index", f.index}, {"instance", parse(f.instance)}, {"report", report_tree(f.report)}});
  }
  return {{"suite", r.suite},
          {"seed", r.seed},
          {"instances", r.instances},
          {"passes", r.passes},
          {"not_applicable", r.not_applicable},
          {"dominance_failures", failures},
          {"worst_slack", optional_number(r.worst_slack)}};
}

std::string canonical(const Json& j) {
  std::string out;
  write(j, out);
  return out;
}

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

namespace {

using detail::Json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_field(cells[i]);
  }
  return out + '\n';
}

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }
std::string opt(const std::optional<bool>& x) { return x ? (*x ? "true" : "false") : std::string(); }

std::string closed_form_cell(const BoundReport& r) {
  std::string out;
  for (const auto& b : r.closed_forms) {
    if (!out.empty()) out += ';';
    out += b.name + '=' + format_double(b.raw);
    if (!b.asserted) out += "(unasserted)";
  }
  return out;
}

using Rows = std::vector<std::pair<std::string, std::string>>;

std::string aligned(const Rows& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  std::string out;
  for (const auto& [k, v] : rows) {
    out += k;
    out.append(width - k.size() + 2, ' ');
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  if (name == "table") return Format::table;
  throw InvalidInput("unknown format: " + std::string(name));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::string dist_to_json(const DiscreteDist& d) { return detail::canonical(detail::dist_tree(d)); }
DiscreteDist dist_from_json(std::string_view text) { return detail::dist_from_tree(detail::parse(text)); }

std::string to_json(const BoundReport& r) { return detail::canonical(detail::report_tree(r)); }

BoundReport bound_report_from_json(std::string_view text) {
  try {
    return detail::report_from_tree(detail::parse(text));
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
}

std::string to_json(const SweepReport& r) { return detail::canonical(detail::sweep_tree(r)); }

SweepReport sweep_report_from_json(std::string_view text) {
  const Json j = detail::parse(text);
  try {
    SweepReport r;
    r.suite = j.at("suite").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.instances = j.at("instances").get<std::uint64_t>();
    r.passes = j.at("passes").get<std::uint64_t>();
    r.not_applicable = j.at("not_applicable").get<std::uint64_t>();
    for (const auto& f : j.at("dominance_failures")) {
      r.dominance_failures.push_back(SweepFailure{f.at("index").get<std::uint64_t>(),
                                                  detail::canonical(f.at("instance")),
                                                  detail::report_from_tree(f.at("report"))});
    }
    if (!j.at("worst_slack").is_null()) r.worst_slack = detail::read_number(j.at("worst_slack"));
    return r;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed sweep report: ") + e.what());
  }
}

std::string to_csv(const std::vector<BoundReport>& reports) {
  std::string out = csv_row({"kind", "metric", "applicable", "ell", "bound_nu_side", "bound_mu_side", "simplified",
                             "best_bound", "oracle_lo", "oracle_hi", "dominated", "closed_forms", "not_applicable"});
  for (const auto& r : reports) {
    out += csv_row({r.kind, r.metric, r.applicable() ? "true" : "false",
                    r.anchor ? std::to_string(r.anchor->ell) : std::string(), opt(r.bound_nu_side),
                    opt(r.bound_mu_side), opt(r.simplified), opt(r.best_bound()),
                    r.oracle_tv ? format_double(r.oracle_tv->lo) : std::string(),
                    r.oracle_tv ? format_double(r.oracle_tv->hi) : std::string(), opt(r.dominated),
                    closed_form_cell(r), r.not_applicable.value_or("")});
  }
  return out;
}

std::string to_csv(const SweepReport& r) {
  return csv_row({"suite", "seed", "instances", "passes", "not_applicable", "dominance_failures",
                  "worst_slack"}) +
         csv_row({r.suite, std::to_string(r.seed), std::to_string(r.instances), std::to_string(r.passes),
                  std::to_string(r.not_applicable), std::to_string(r.dominance_failures.size()),
                  opt(r.worst_slack)});
}

std::string to_table(const std::vector<BoundReport>& reports) {
  std::string out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    Rows rows{{"kind", r.kind}, {"metric", r.metric}, {"applicable", r.applicable() ? "yes" : "no"}};
    if (r.not_applicable) rows.emplace_back("reason", *r.not_applicable);
    rows.emplace_back("hypothesis", r.hypothesis.holds ? "holds" : "fails");
    if (r.anchor) {
      rows.emplace_back("anchor", std::to_string(r.anchor->ell) + (r.anchor->ratio_matched ? " (ratio-matched)" : ""));
    }
    for (const auto& p : r.parameters) {
      rows.emplace_back(p.name, format_double(p.value) + (p.exact.empty() ? "" : " = " + p.exact));
    }
    if (r.bound_nu_side) rows.emplace_back("bound_nu_side", format_double(*r.bound_nu_side));
    if (r.bound_mu_side) rows.emplace_back("bound_mu_side", format_double(*r.bound_mu_side));
    if (r.simplified) rows.emplace_back("simplified", format_double(*r.simplified));
    for (const auto& b : r.closed_forms) {
      std::string v = format_double(b.raw) + (b.asserted ? "" : " unasserted");
      if (b.dominates) v += *b.dominates ? " dominates" : " does not dominate";
      rows.emplace_back(b.name, v);
    }
    if (r.oracle_tv) {
      rows.emplace_back(r.metric == "tv" ? "oracle_tv" : "oracle_" + r.metric,
                        "[" + format_double(r.oracle_tv->lo) + ", " + format_double(r.oracle_tv->hi) + "]");
    }
    if (r.dominated) rows.emplace_back("dominated", *r.dominated ? "yes" : "no");
    for (const auto& n : r.notes) rows.emplace_back("note", n);
    if (i) out += '\n';
    out += aligned(rows);
  }
  return out;
}

std::string to_table(const SweepReport& r) {
  return aligned({{"suite", r.suite},
                  {"seed", std::to_string(r.seed)},
                  {"instances", std::to_string(r.instances)},
                  {"passes", std::to_string(r.passes)},
                  {"not_applicable", std::to_string(r.not_applicable)},
                  {"dominance_failures", std::to_string(r.dominance_failures.size())},
                  {"worst_slack", r.worst_slack ? format_double(*r.worst_slack) : "-"}});
}

}  // namespace rlc
