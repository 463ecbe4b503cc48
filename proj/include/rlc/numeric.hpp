#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace rlc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Relative slack for float-mode certificate inequalities.
inline constexpr double kCertificateSlack = 1e-12;
/// Default truncation budget for infinite-support families.
inline constexpr double kDefaultTailBudget = 1e-12;
/// Tolerance for a bound to count as dominating an oracle TV.
inline constexpr double kDominanceSlack = 1e-10;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& i) { return i.convert_to<double>(); }
inline double to_double(double d) { return d; }

std::string to_string(const Rational& r);

/// Exact C(n, k) as a big integer; zero outside 0 <= k <= n.
BigInt binomial_coefficient(int n, int k);

/// Rational power with a non-negative integer exponent.
Rational pow(const Rational& base, unsigned exponent);

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2 (double-double).
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble two_sum(double a, double b) noexcept {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
  }
  static DoubleDouble two_prod(double a, double b) noexcept {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
  }

  DoubleDouble& operator+=(const DoubleDouble& o) noexcept {
    DoubleDouble s = two_sum(hi, o.hi);
    s.lo += lo + o.lo;
    *this = two_sum(s.hi, s.lo);
    return *this;
  }
  DoubleDouble& operator+=(double x) noexcept { return *this += DoubleDouble{x, 0.0}; }

  friend DoubleDouble operator*(const DoubleDouble& a, double b) noexcept {
    DoubleDouble p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return two_sum(p.hi, p.lo);
  }

  double value() const noexcept { return hi + lo; }
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace rlc
