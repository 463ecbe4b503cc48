// Command-line front end over the C interface.

#include "rlc/rlc.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int kExitInput = 1;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "a,b" of the stated arity, each parsed strictly.
std::vector<double> numbers(const std::string& text, std::size_t arity, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InputError(flag + ": malformed number '" + item + "'");
    out.push_back(v);
  }
  if (arity && out.size() != arity) throw InputError(flag + " expects " + std::to_string(arity) + " values");
  return out;
}

int integer(double v, const std::string& flag) {
  if (v != static_cast<int>(v)) throw InputError(flag + " expects integers");
  return static_cast<int>(v);
}

// Success probabilities from a JSON file: [p1, p2, ...] or a list of
// two-point laws [1 - p, p] / {"masses": [1 - p, p]}.
std::vector<double> probabilities_from_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  if (!j.is_array()) throw InputError(path + ": expected a JSON array");
  std::vector<double> p;
  for (const auto& x : j) {
    if (x.is_number()) {
      p.push_back(x.get<double>());
      continue;
    }
    const auto& masses = x.is_object() && x.contains("masses") ? x.at("masses") : x;
    const bool shifted = x.is_object() && x.value("offset", 0) != 0;
    if (!masses.is_array() || masses.size() != 2 || shifted || !masses[1].is_number()) {
      throw InputError(path + ": each entry must be a probability or a law on {0, 1}");
    }
    p.push_back(masses[1].get<double>());
  }
  return p;
}

struct Output {
  rlc_format format = RLC_FORMAT_JSON;
};

int finish(rlc_status status, rlc_result* result, const Output& out) {
  if (status == RLC_INVALID_INPUT || status == RLC_INTERNAL_ERROR || !result) {
    std::cerr << "error: " << rlc_last_error() << '\n';
    return status == RLC_INTERNAL_ERROR ? static_cast<int>(RLC_INTERNAL_ERROR) : kExitInput;
  }
  char* text = nullptr;
  if (rlc_result_render(result, out.format, &text) != RLC_OK) {
    std::cerr << "error: " << rlc_last_error() << '\n';
    rlc_result_free(result);
    return RLC_INTERNAL_ERROR;
  }
  std::fputs(text, stdout);
  if (out.format == RLC_FORMAT_JSON) std::fputc('\n', stdout);
  rlc_string_free(text);
  rlc_result_free(result);
  if (status != RLC_OK) std::cerr << rlc_status_name(status) << ": " << rlc_last_error() << '\n';
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Total-variation bounds from relative log-concavity, checked against exact oracles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rlc_version()));

  rlc_options options;
  rlc_options_init(&options);
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--tail-budget", options.tail_budget, "Mass allowed to be cut from infinite-support laws");
  app.add_option("--tolerance", options.certificate_slack, "Relative slack for log-concavity certificates");
  app.fallthrough();

  std::function<rlc_status(rlc_result**)> run;
  auto on = [&](CLI::App* sub, auto fn) { sub->callback([&run, fn] { run = fn; }); };

  // Poisson-binomial commands.
  struct {
    std::string p, file;
    bool proof_tight = false;
  } pb;
  for (const char* name : {"pb-binomial", "pb-poisson"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "pb-binomial"
                                             ? "Binomial approximation of a Poisson-binomial law"
                                             : "Poisson approximation of a Poisson-binomial law");
    auto* p = sub->add_option("--p", pb.p, "Success probabilities p1,p2,...");
    auto* f = sub->add_option("--file", pb.file, "JSON file of probabilities or laws on {0, 1}")->check(CLI::ExistingFile);
    p->excludes(f);
    sub->add_flag("--proof-tight", pb.proof_tight, "Secondary bound with the sharper exponent");
    const bool binomial = std::string(name) == "pb-binomial";
    on(sub, [&pb, &options, binomial](rlc_result** out) {
      if (pb.p.empty() && pb.file.empty()) throw InputError("give --p or --file");
      const auto p = pb.file.empty() ? numbers(pb.p, 0, "--p") : probabilities_from_file(pb.file);
      options.proof_tight = pb.proof_tight;
      return binomial ? rlc_pb_binomial(p.data(), p.size(), &options, out)
                      : rlc_pb_poisson(p.data(), p.size(), &options, out);
    });
  }

  struct {
    std::string p, file;
  } sg;
  auto* sum_geo = app.add_subcommand("sum-geometric", "Geometric approximation of a sum of log-concave laws");
  auto* sg_p = sum_geo->add_option("--p", sg.p, "Bernoulli summands p1,p2,...");
  sum_geo->add_option("--file", sg.file, "JSON array of summand laws")->check(CLI::ExistingFile)->excludes(sg_p);
  on(sum_geo, [&sg, &options](rlc_result** out) {
    std::string laws;
    if (!sg.file.empty()) {
      laws = read_file(sg.file);
    } else if (!sg.p.empty()) {
      nlohmann::json j = nlohmann::json::array();
      for (double p : numbers(sg.p, 0, "--p")) j.push_back({1.0 - p, p});
      laws = j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
    } else {
      throw InputError("give --p or --file");
    }
    return rlc_sum_geometric(laws.c_str(), &options, out);
  });

  struct {
    std::string uniform, partition, sets;
    int m = 0;
    bool include_zero = false;
  } mt;
  auto* matroid = app.add_subcommand("matroid", "Binomial and Poisson approximation of matroid independent-set sizes");
  auto* mu = matroid->add_option("--uniform", mt.uniform, "Uniform matroid n,r");
  auto* mp = matroid->add_option("--partition", mt.partition, "Partition matroid c1:d1,c2:d2,...");
  auto* ms = matroid->add_option("--sets", mt.sets, "JSON file listing the independent sets")->check(CLI::ExistingFile);
  mu->excludes(mp)->excludes(ms);
  mp->excludes(ms);
  matroid->add_option("--m", mt.m, "Anchor m")->required();
  matroid->add_flag("--include-zero", mt.include_zero, "Normalize over all independent sets, the empty one included");
  on(matroid, [&mt, &options](rlc_result** out) {
    options.include_zero = mt.include_zero;
    if (!mt.uniform.empty()) {
      const auto v = numbers(mt.uniform, 2, "--uniform");
      return rlc_matroid_uniform(integer(v[0], "--uniform"), integer(v[1], "--uniform"), mt.m, &options, out);
    }
    if (!mt.partition.empty()) {
      std::vector<int> sizes, caps;
      std::stringstream ss(mt.partition);
      for (std::string item; std::getline(ss, item, ',');) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw InputError("--partition expects c:d pairs");
        sizes.push_back(integer(numbers(item.substr(0, colon), 1, "--partition")[0], "--partition"));
        caps.push_back(integer(numbers(item.substr(colon + 1), 1, "--partition")[0], "--partition"));
      }
      return rlc_matroid_partition(sizes.data(), caps.data(), sizes.size(), mt.m, &options, out);
    }
    if (!mt.sets.empty()) return rlc_matroid_sets(read_file(mt.sets).c_str(), mt.m, &options, out);
    throw InputError("give --uniform, --partition or --sets");
  });

  struct {
    std::string box, cube, product;
    int ball = 0;
    int m = 0;
  } iv;
  auto* ivs = app.add_subcommand("iv", "Poisson approximation of intrinsic-volume laws");
  auto* ib = ivs->add_option("--box", iv.box, "Box side lengths s1,s2,...");
  auto* ic = ivs->add_option("--cube", iv.cube, "Cube n,s");
  auto* il = ivs->add_option("--ball", iv.ball, "Euclidean unit ball of dimension n");
  auto* ip = ivs->add_option("--product", iv.product, "JSON file of product factors")->check(CLI::ExistingFile);
  ib->excludes(ic)->excludes(il)->excludes(ip);
  ic->excludes(il)->excludes(ip);
  il->excludes(ip);
  ivs->add_option("--m", iv.m, "Anchor m")->capture_default_str();
  on(ivs, [&iv, &options, il](rlc_result** out) {
    if (!iv.box.empty()) {
      const auto s = numbers(iv.box, 0, "--box");
      return rlc_iv_box(s.data(), s.size(), iv.m, &options, out);
    }
    if (!iv.cube.empty()) {
      const auto v = numbers(iv.cube, 2, "--cube");
      return rlc_iv_cube(integer(v[0], "--cube"), v[1], iv.m, &options, out);
    }
    if (il->count()) return rlc_iv_ball(iv.ball, iv.m, &options, out);
    if (!iv.product.empty()) return rlc_iv_product(read_file(iv.product).c_str(), &options, out);
    throw InputError("give --box, --cube, --ball or --product");
  });

  struct {
    double lambda = 0.0, p = 0.0;
    std::string severity, count;
  } cp;
  auto* compound = app.add_subcommand("compound", "Geometric approximation of compound laws");
  compound->require_subcommand(1);
  auto* cpois = compound->add_subcommand("poisson", "Compound Poisson");
  cpois->add_option("--lambda", cp.lambda, "Poisson rate")->required();
  cpois->add_option("--severity", cp.severity, "Severity masses F0,F1,...")->required();
  on(cpois, [&cp, &options](rlc_result** out) {
    const auto f = numbers(cp.severity, 0, "--severity");
    return rlc_compound_poisson(cp.lambda, f.data(), f.size(), &options, out);
  });
  auto* cgeo = compound->add_subcommand("geometric", "Compound sum of geometric summands");
  cgeo->add_option("--count", cp.count, "JSON file with the count law")->required()->check(CLI::ExistingFile);
  cgeo->add_option("--p", cp.p, "Summand parameter: P[xi = j] = (1 - p) p^j")->required();
  on(cgeo, [&cp, &options](rlc_result** out) {
    return rlc_compound_geometric(read_file(cp.count).c_str(), cp.p, &options, out);
  });

  struct {
    std::string a, b, which = "i";
    double z = 0.0;
  } gm;
  auto* gamma = app.add_subcommand("gamma", "Total-variation bounds between Gamma laws (shape,rate)");
  gamma->add_option("--a", gm.a, "First law kappa,lambda")->required();
  gamma->add_option("--b", gm.b, "Second law kappa,lambda")->required();
  gamma->add_option("--case", gm.which, "Case i (matched scores) or ii (free point z)")->capture_default_str()
      ->check(CLI::IsMember({"i", "ii"}));
  auto* gz = gamma->add_option("--z", gm.z, "Evaluation point for case ii");
  on(gamma, [&gm, &options, gz](rlc_result** out) {
    const auto a = numbers(gm.a, 2, "--a");
    const auto b = numbers(gm.b, 2, "--b");
    const bool ii = gm.which == "ii";
    if (ii && !gz->count()) throw InputError("case ii needs --z");
    return rlc_gamma(a[0], a[1], b[0], b[1], ii, gm.z, &options, out);
  });

  std::string density;
  auto* expapprox = app.add_subcommand("expapprox", "Exponential approximation in Kolmogorov distance");
  expapprox->add_option("--density", density, "builtin:exponential, builtin:exp-quadratic or builtin:exp-cubic")
      ->required();
  on(expapprox, [&density, &options](rlc_result** out) {
    const std::string prefix = "builtin:";
    if (density.rfind(prefix, 0) != 0) throw InputError("--density expects builtin:<name>");
    return rlc_expapprox(density.substr(prefix.size()).c_str(), &options, out);
  });

  struct {
    std::string suite = "dominance";
    std::uint64_t n = 100, seed = 0;
    unsigned workers = 0;
  } vf;
  auto* verify = app.add_subcommand("verify", "Randomized dominance sweep against exact oracles");
  verify->add_option("--suite", vf.suite, "dominance, poisson-binomial, matroid, iv, compound or gamma")->capture_default_str();
  verify->add_option("--n", vf.n, "Number of instances")->capture_default_str();
  verify->add_option("--seed", vf.seed, "Seed; equal seeds give byte-identical output")->capture_default_str();
  verify->add_option("--workers", vf.workers, "Worker threads (0: all cores)")->capture_default_str();
  on(verify, [&vf](rlc_result** out) { return rlc_verify(vf.suite.c_str(), vf.n, vf.seed, vf.workers, out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  Output out;
  out.format = format == "csv" ? RLC_FORMAT_CSV : format == "table" ? RLC_FORMAT_TABLE : RLC_FORMAT_JSON;
  rlc_result* result = nullptr;
  rlc_status status;
  try {
    status = run(&result);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return finish(status, result, out);
}
