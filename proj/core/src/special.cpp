#include "parisi/special.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <utility>

namespace parisi::special {

namespace {

// Continued fraction for erfcx on u >= 3 (modified Lentz). The tail
// converges in a few dozen terms at u = 3 and faster beyond.
double erfcx_continued_fraction(double u) {
  constexpr double kTiny = 1e-300;
  double f = u;
  double c = u;
  double d = 0.0;
  for (int n = 1; n < 300; ++n) {
    const double a = 0.5 * n;
    d = u + a * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = u + a / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (kSqrtPi * f);
}

}  // namespace

double erfcx(double u) {
  if (std::isnan(u)) return u;
  if (u < 3.0) {
    if (u < -26.7) return std::numeric_limits<double>::infinity();
    return std::exp(u * u) * std::erfc(u);
  }
  return erfcx_continued_fraction(u);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

double log_normal_cdf(double x) {
  if (std::isnan(x)) return x;
  if (x > 5.0) {
    // Phi(x) = 1 - Phi(-x); Phi(-x) < 3e-7 here.
    return std::log1p(-0.5 * std::erfc(x / kSqrt2));
  }
  if (x > -5.0) return std::log(0.5 * std::erfc(-x / kSqrt2));
  const double u = -x / kSqrt2;
  return std::log(0.5 * erfcx(u)) - u * u;
}

double log_cosh(double x) {
  const double a = std::fabs(x);
  // log cosh a = a + log1p(exp(-2a)) - log 2
  return a + std::log1p(std::exp(-2.0 * a)) - 0.69314718055994530942;
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

double folded_mean(double x, double s) {
  if (s == 0.0) return std::fabs(x);
  return s * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * (x / s) * (x / s)) +
         x * std::erf(x / (s * kSqrt2));
}

double folded_log_mgf(double m, double x, double s) {
  if (s == 0.0) return std::fabs(x);
  if (m < 1e-3) {
    // Cumulants of |Y|, Y ~ N(x, s^2): log E e^{m|Y|} / m = k1 + m k2/2 + m^2 k3/6 + O(m^3).
    const double k1 = folded_mean(x, s);
    if (m == 0.0) return k1;
    const double second = x * x + s * s;
    auto half = [s](double y) {
      return (y * y * y + 3.0 * y * s * s) * normal_cdf(y / s) +
             s * (y * y + 2.0 * s * s) * normal_pdf(y / s);
    };
    const double third = half(x) + half(-x);
    const double k2 = second - k1 * k1;
    const double k3 = third - 3.0 * k1 * second + 2.0 * k1 * k1 * k1;
    return k1 + m * k2 / 2.0 + m * m * k3 / 6.0;
  }
  const double r = x / s;
  const double log_mgf = 0.5 * m * m * s * s +
                         log_add_exp(m * x + log_normal_cdf(r + m * s),
                                     -m * x + log_normal_cdf(-r + m * s));
  return log_mgf / m;
}

}  // namespace parisi::special
