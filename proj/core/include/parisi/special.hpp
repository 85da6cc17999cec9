#pragma once

// Gaussian special functions used across the library. All of them stay
// finite far into the tails where the naive formulas underflow.

namespace parisi::special {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

/// Scaled complementary error function exp(u^2) erfc(u); valid for all real u
/// (for u < -26 the result overflows to +inf, as the true value does).
double erfcx(double u);

/// Standard normal CDF.
double normal_cdf(double x);

/// log of the standard normal CDF. Accurate down to x = -1e8 and up to +inf.
double log_normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// log(cosh(x)) without overflow.
double log_cosh(double x);

/// log(exp(a) + exp(b)) with the larger term factored out.
double log_add_exp(double a, double b);

/// E|x + s z| for standard normal z (folded normal mean).
double folded_mean(double x, double s);

/// (1/m) log E exp(m |x + s z|) for m >= 0, s >= 0; the folded-normal mean at
/// m = 0. Uses the closed form
///   E e^{m|x+sz|} = e^{m^2 s^2/2} (e^{mx} Phi(x/s + ms) + e^{-mx} Phi(-x/s + ms))
/// in log space, and a cumulant series when m is tiny (the closed form loses
/// about eps/m there).
double folded_log_mgf(double m, double x, double s);

}  // namespace parisi::special
