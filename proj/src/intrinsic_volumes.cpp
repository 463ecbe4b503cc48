#include "rlc/intrinsic_volumes.hpp"

#include <cmath>
#include <numbers>

namespace rlc {

IVSequence IVSequence::from_values(std::vector<double> V, std::string body) {
  if (V.empty()) throw InvalidInput("intrinsic volumes need V_0");
  CompensatedSum w;
  for (double v : V) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("intrinsic volumes must be finite and non-negative");
    w.add(v);
  }
  if (!(w.value() > 0.0)) throw InvalidInput("total intrinsic volume must be positive");
  IVSequence iv;
  iv.n = static_cast<int>(V.size()) - 1;
  iv.V = std::move(V);
  iv.W = w.value();
  iv.body = std::move(body);
  return iv;
}

IVSequence iv_box(const std::vector<double>& sides) {
  std::vector<DoubleDouble> e(sides.size() + 1);
  e[0] = {1.0, 0.0};
  double log_w = 0.0;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const double s = sides[i];
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("box sides must be positive");
    for (std::size_t j = i + 1; j > 0; --j) e[j] += e[j - 1] * s;
    log_w += std::log1p(s);
  }
  std::vector<double> V(e.size());
  for (std::size_t j = 0; j < e.size(); ++j) V[j] = e[j].value();
  IVSequence iv = IVSequence::from_values(std::move(V), "box");
  const double w = std::exp(log_w);
  if (std::fabs(iv.W - w) > 1e-12 * w) throw std::logic_error("box total intrinsic volume mismatch");
  return iv;
}

std::vector<Rational> iv_box_exact(const std::vector<Rational>& sides) {
  std::vector<Rational> e(sides.size() + 1);
  e[0] = 1;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (sides[i] <= 0) throw InvalidInput("box sides must be positive");
    for (std::size_t j = i + 1; j > 0; --j) e[j] += e[j - 1] * sides[i];
  }
  return e;
}

IVSequence iv_cube(int n, double s) {
  if (n < 0) throw InvalidInput("cube dimension must be non-negative");
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("cube side must be positive");
  std::vector<double> V(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) V[j] = to_double(binomial_coefficient(n, j)) * std::pow(s, j);
  return IVSequence::from_values(std::move(V), "cube");
}

double unit_ball_volume(int m) {
  if (m < 0) throw InvalidInput("ball dimension must be non-negative");
  return std::exp(0.5 * m * std::log(std::numbers::pi) - std::lgamma(1.0 + 0.5 * m));
}

IVSequence iv_ball(int n) {
  if (n < 1) throw InvalidInput("ball dimension must be at least 1");
  std::vector<double> V(static_cast<std::size_t>(n) + 1);
  const double kn = unit_ball_volume(n);
  for (int j = 0; j <= n; ++j) V[j] = to_double(binomial_coefficient(n, j)) * kn / unit_ball_volume(n - j);
  V[0] = 1.0;
  return IVSequence::from_values(std::move(V), "ball");
}

DiscreteDist z_dist(const IVSequence& iv) { return make_dist<double>(0, iv.V); }

BoundReport poisson_iv_bound(const IVSequence& iv, int m, double tail_budget) {
  if (m < 0 || m >= iv.n) throw InvalidInput("anchor m must satisfy 0 <= m <= n - 1");
  const double vm = iv.V[m], vm1 = iv.V[m + 1];
  if (!(vm > 0.0 && vm1 > 0.0)) throw NotApplicable("V_m and V_{m+1} must be positive");
  const double lambda = (m + 1.0) * vm1 / vm;
  const DiscreteDist z = z_dist(iv);
  BoundReport report = certify(family_poisson(lambda, tail_budget, iv.n), z, Index{m});
  report.kind = "iv-poisson";
  report.set_parameter("n", iv.n);
  report.set_parameter("m", m);
  report.set_parameter("lambda", lambda);
  report.set_parameter("W", iv.W);
  const double log_unmatched = std::lgamma(m + 1.0) + lambda + std::log(vm) - std::log(iv.W);
  const bool forward = report.applicable() && z.at(m) >= report.target->at(m);
  // Without lambda^m the form equals Z_K[m]/Poisson[m] - 1 only at m = 0.
  report.closed_forms.push_back(named_bound("poisson", std::expm1(log_unmatched), forward && m == 0));
  report.closed_forms.push_back(named_bound("poisson_matched", std::expm1(log_unmatched - m * std::log(lambda)), forward));
  if (!forward) report.notes.push_back("Z_K[m] < Poisson[m]: the closed form is not a valid bound here");
  report.attach_oracle(*report.oracle_tv);
  if (iv.body == "ball" && report.applicable() && !(*report.closed_form("poisson_matched")->dominates)) {
    report.not_applicable = "the Poisson closed form does not dominate the oracle for this ball";
  }
  return report;
}

ProductFactor ProductFactor::segment(double length) { return box({length}); }

ProductFactor ProductFactor::box(std::vector<double> sides, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) throw InvalidInput("factor scale must lie in (0, 1]");
  ProductFactor f;
  f.scale = scale;
  f.body = iv_box(sides);
  f.box_sides = std::move(sides);
  return f;
}

namespace {

double scaled_v1(const ProductFactor& f) {
  if (f.body.n < 1) return 0.0;
  return f.scale * f.body.V[1];
}

void check_factors(const std::vector<ProductFactor>& factors) {
  if (factors.empty()) throw InvalidInput("a product needs at least one factor");
  for (const auto& f : factors) {
    if (!(f.scale > 0.0 && f.scale <= 1.0)) throw InvalidInput("factor scale must lie in (0, 1]");
  }
}

bool all_segments(const std::vector<ProductFactor>& factors) {
  return std::all_of(factors.begin(), factors.end(),
                     [](const ProductFactor& f) { return f.box_sides && f.box_sides->size() == 1; });
}

}  // namespace

double product_bounds(const std::vector<ProductFactor>& factors, ProductMode mode) {
  check_factors(factors);
  CompensatedSum e;
  switch (mode) {
    case ProductMode::rare:
      for (const auto& f : factors) e.add(scaled_v1(f) * scaled_v1(f));
      break;
    case ProductMode::scaled: {
      int d = 0;
      double theta = 0.0;
      for (const auto& f : factors) {
        d = std::max(d, f.body.n);
        theta = std::max(theta, f.body.W);
        e.add(f.scale * f.scale);
      }
      return std::expm1(d * theta * e.value());
    }
    case ProductMode::box:
      if (!all_segments(factors)) throw InvalidInput("box mode needs one-dimensional segment factors");
      for (const auto& f : factors) {
        const double s = f.scale * f.box_sides->front();
        e.add(s * s);
      }
      break;
  }
  return std::expm1(e.value());
}

BoundReport product_report(const std::vector<ProductFactor>& factors, double tail_budget) {
  check_factors(factors);
  CompensatedSum v1;
  double log_w = 0.0;
  bool boxes = true;
  std::vector<double> sides;
  for (const auto& f : factors) {
    v1.add(scaled_v1(f));
    // W(s K) = sum_j s^j V_j(K)
    double w = 0.0;
    for (int j = f.body.n; j >= 0; --j) w = w * f.scale + f.body.V[j];
    log_w += std::log(w);
    if (f.box_sides) {
      for (double s : *f.box_sides) sides.push_back(f.scale * s);
    } else {
      boxes = false;
    }
  }

  BoundReport report;
  if (boxes) {
    report = poisson_iv_bound(iv_box(sides), 0, tail_budget);
  } else {
    report.notes.push_back("general factors: only V_1 and W of the product are known, no oracle");
  }
  report.kind = "iv-product";
  report.set_parameter("factors", static_cast<double>(factors.size()));
  report.set_parameter("V1", v1.value());
  report.set_parameter("W", std::exp(log_w));
  if (!boxes) report.closed_forms.push_back(named_bound("poisson", std::expm1(v1.value() - log_w)));
  report.closed_forms.push_back(named_bound("rare", product_bounds(factors, ProductMode::rare)));
  report.closed_forms.push_back(named_bound("scaled", product_bounds(factors, ProductMode::scaled), false));
  if (all_segments(factors)) report.closed_forms.push_back(named_bound("box", product_bounds(factors, ProductMode::box)));
  if (report.oracle_tv) report.attach_oracle(*report.oracle_tv);
  return report;
}

}  // namespace rlc
