#pragma once

// Intrinsic volumes of boxes, cubes, balls and products, the intrinsic-volume
// random variable Z_K with P[Z_K = j] = V_j / W, and its Poisson approximation.

#include "rlc/relbound.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rlc {

struct IVSequence {
  /// Ambient dimension; V has n + 1 entries.
  int n = 0;
  std::vector<double> V;
  /// Total intrinsic volume sum_j V_j.
  double W = 1.0;
  /// "box", "cube", "ball", "product" or "custom"; balls get special handling.
  std::string body = "custom";

  /// Validates non-negative entries and fills W.
  static IVSequence from_values(std::vector<double> V, std::string body = "custom");
  friend bool operator==(const IVSequence&, const IVSequence&) = default;
};

/// V_j = e_j(s_1..s_n); asserts W = prod (1 + s_i) to 1e-12 relative.
IVSequence iv_box(const std::vector<double>& sides);
std::vector<Rational> iv_box_exact(const std::vector<Rational>& sides);
/// V_j = s^j C(n, j)
IVSequence iv_cube(int n, double s);
/// V_j = C(n, j) kappa_n / kappa_{n-j}
IVSequence iv_ball(int n);
/// Volume of the unit ball in R^m: pi^(m/2) / Gamma(1 + m/2).
double unit_ball_volume(int m);

DiscreteDist z_dist(const IVSequence& iv);

/// Anchored report for Z_K against Poisson(lambda), lambda = (m + 1) V_{m+1} / V_m,
/// with the closed forms "poisson" m! e^lambda V_m / W - 1 (asserted only at m = 0)
/// and "poisson_matched" m! e^lambda V_m / (lambda^m W) - 1.
BoundReport poisson_iv_bound(const IVSequence& iv, int m, double tail_budget = kDefaultTailBudget);

/// Factor K_i = scale * body of a product body.
struct ProductFactor {
  double scale = 1.0;
  IVSequence body;
  /// Side lengths when body is a box; enables exact assembly of the product.
  std::optional<std::vector<double>> box_sides;

  static ProductFactor segment(double length);
  static ProductFactor box(std::vector<double> sides, double scale = 1.0);
};

enum class ProductMode { rare, scaled, box };

/// rare: exp(sum V_1(K_i)^2) - 1; scaled: exp(d theta sum s_i^2) - 1 with
/// theta = max W(body_i) and d the largest body dimension; box: exp(sum s_i^2) - 1
/// for one-dimensional segment factors of length s_i.
double product_bounds(const std::vector<ProductFactor>& factors, ProductMode mode);

/// All applicable product forms, V_1 and W of the product from additivity and
/// multiplicativity, and, when every factor is a box, the exact product box
/// with the m = 0 Poisson report and its oracle TV.
BoundReport product_report(const std::vector<ProductFactor>& factors, double tail_budget = kDefaultTailBudget);

}  // namespace rlc
