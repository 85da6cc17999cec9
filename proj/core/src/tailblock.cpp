#include "parisi/tailblock.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "parisi/errors.hpp"
#include "parisi/special.hpp"

namespace parisi {

namespace {

constexpr double kSmallExponent = 1e-3;

void check_time(const TailBlockParams& p, double t, bool allow_b) {
  if (!(t >= p.a) || t > p.b || (!allow_b && t == p.b)) {
    throw DomainError("tailblock: t=" + std::to_string(t) + " outside [a, b" +
                      (allow_b ? "]" : ")"));
  }
}

void check_open(const TailBlockParams& p, double t) {
  if (!(t > p.a && t < p.b)) {
    throw DomainError("tailblock: t=" + std::to_string(t) + " outside (a, b)");
  }
}

// A and its x-derivatives at one point, sharing the two log_g evaluations.
struct Local {
  double A;
  double Ax;
  double sech2;  // 1 - A_x^2, computed without cancellation
  double Gamma;
  double Axx;
};

Local local(const TailBlockParams& p, double s, double y) {
  const double mp = p.m_prime;
  const double r = y / s;
  const double common = 0.5 * s * s * mp * mp;
  const double lp = common + mp * y + special::log_normal_cdf(mp * s + r);
  const double lm = common - mp * y + special::log_normal_cdf(mp * s - r);
  Local out;
  out.A = mp >= kSmallExponent ? special::log_add_exp(lp, lm) / mp
                               : special::folded_log_mgf(mp, y, s);
  const double half = 0.5 * (lp - lm);
  out.Ax = std::tanh(half);
  const double e = std::exp(-2.0 * std::fabs(half));
  out.sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
  out.Gamma = std::exp(-0.5 * r * r - special::kLogSqrt2Pi - std::log(s) - mp * out.A);
  out.Axx = mp * out.sech2 + 2.0 * out.Gamma;
  return out;
}

// Weighted sums over the tail rule, tilted by V = exp(m (A - B)).
struct Sums {
  double B = 0.0;
  double ax2 = 0.0;
  double ax4 = 0.0;
  double axx2 = 0.0;
  double axx_ax2 = 0.0;
  double mixed = 0.0;  // E A_x^{k-1} A_xx V for the requested k
  double even = 0.0;   // E A_x^{2k} V for the requested k
  double vsum = 0.0;
};

struct SumRequest {
  int mixed_k = 0;
  int even_k = 0;
};

Sums tilted_sums(const TailBlockParams& p, double t, double x, const QuadratureRule& rule,
                 SumRequest req = {}) {
  const double s = std::sqrt(p.b - t);
  const double spread = std::sqrt(t - p.a);
  const std::size_t n = rule.size();
  std::vector<Local> pts(n);
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    pts[j] = local(p, s, x + spread * rule.nodes[j]);
    values[j] = pts[j].A;
  }
  Sums out;
  out.B = log_moment(p.m, values, rule.weights);
  for (std::size_t j = 0; j < n; ++j) {
    const Local& q = pts[j];
    const double v = rule.weights[j] * std::exp(p.m * (q.A - out.B));
    const double ax2 = q.Ax * q.Ax;
    out.vsum += v;
    out.ax2 += v * ax2;
    out.ax4 += v * ax2 * ax2;
    out.axx2 += v * q.Axx * q.Axx;
    out.axx_ax2 += v * q.Axx * ax2;
    if (req.mixed_k > 0) out.mixed += v * std::pow(q.Ax, req.mixed_k - 1) * q.Axx;
    if (req.even_k > 0) out.even += v * std::pow(ax2, req.even_k);
  }
  return out;
}

Sums tilted_sums(const TailBlockParams& p, double t, double x, SumRequest req = {}) {
  return tilted_sums(p, t, x, tail_rule(p, t, x), req);
}

}  // namespace

void require_valid(const TailBlockParams& p) {
  if (!(p.a >= 0.0 && p.b > p.a && std::isfinite(p.b))) {
    throw DomainError("tailblock: requires 0 <= a < b");
  }
  if (!(p.m >= 0.0 && p.m_prime > p.m && std::isfinite(p.m_prime))) {
    throw DomainError("tailblock: requires 0 <= m < m'");
  }
}

double log_g(const TailBlockParams& p, double t, double x) {
  check_time(p, t, false);
  const double s = std::sqrt(p.b - t);
  return 0.5 * s * s * p.m_prime * p.m_prime + p.m_prime * x +
         special::log_normal_cdf(p.m_prime * s + x / s);
}

double A(const TailBlockParams& p, double t, double x) {
  check_time(p, t, true);
  if (t == p.b) return std::fabs(x);
  return local(p, std::sqrt(p.b - t), x).A;
}

double A_x(const TailBlockParams& p, double t, double x) {
  check_time(p, t, true);
  if (t == p.b) {
    if (x == 0.0) throw DomainError("tailblock: A_x(b, 0) is undefined");
    return x > 0.0 ? 1.0 : -1.0;
  }
  return local(p, std::sqrt(p.b - t), x).Ax;
}

double A_xx(const TailBlockParams& p, double t, double x) {
  check_time(p, t, false);
  return local(p, std::sqrt(p.b - t), x).Axx;
}

double A_t(const TailBlockParams& p, double t, double x) {
  return -0.5 * p.m_prime - Gamma(p, t, x);
}

double Gamma(const TailBlockParams& p, double t, double x) {
  check_time(p, t, false);
  return local(p, std::sqrt(p.b - t), x).Gamma;
}

double pde_residual(const TailBlockParams& p, double t, double x) {
  check_time(p, t, false);
  const Local q = local(p, std::sqrt(p.b - t), x);
  const double At = -0.5 * p.m_prime - q.Gamma;
  return At + 0.5 * (q.Axx + p.m_prime * q.Ax * q.Ax);
}

double pde_residual_fd(const TailBlockParams& p, double t, double x, double h) {
  check_open(p, t);
  const double ht = std::min(h, 0.5 * std::min(t - p.a, p.b - t));
  const double At = (A(p, t + ht, x) - A(p, t - ht, x)) / (2.0 * ht);
  const double a0 = A(p, t, x);
  const double ap = A(p, t, x + h);
  const double am = A(p, t, x - h);
  const double Ax = (ap - am) / (2.0 * h);
  const double Axx = (ap - 2.0 * a0 + am) / (h * h);
  return At + 0.5 * (Axx + p.m_prime * Ax * Ax);
}

QuadratureRule tail_rule(const TailBlockParams& p, double t, double x, const PanelLayout& layout) {
  check_open(p, t);
  const double spread = std::sqrt(t - p.a);
  const double width = std::min(std::sqrt(p.b - t), 1.0 / p.m_prime);
  return kink_rule(-x / spread, width / spread, p.m * spread, layout);
}

double B(const TailBlockParams& p, double t, double x) {
  return B(p, t, x, tail_rule(p, t, x));
}

double B(const TailBlockParams& p, double t, double x, const QuadratureRule& rule) {
  check_open(p, t);
  const double s = std::sqrt(p.b - t);
  const double spread = std::sqrt(t - p.a);
  std::vector<double> values(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) values[j] = local(p, s, x + spread * rule.nodes[j]).A;
  return log_moment(p.m, values, rule.weights);
}

double V(const TailBlockParams& p, double t, double x, double y) {
  return std::exp(p.m * (A(p, t, y) - B(p, t, x)));
}

double C(const TailBlockParams& p, double t, double x) { return tilted_sums(p, t, x).ax2; }

double C(const TailBlockParams& p, double t, double x, const QuadratureRule& rule) {
  check_open(p, t);
  return tilted_sums(p, t, x, rule).ax2;
}

TailMoments tail_moments(const TailBlockParams& p, double t, double x, const PanelLayout& layout) {
  const Sums s = tilted_sums(p, t, x, tail_rule(p, t, x, layout));
  return {s.B, s.ax2};
}

double B_t_formula(const TailBlockParams& p, double t, double x) {
  return 0.5 * (p.m - p.m_prime) * C(p, t, x);
}

double C_t_formula(const TailBlockParams& p, double t, double x) {
  const Sums s = tilted_sums(p, t, x);
  const double dm = p.m - p.m_prime;
  return s.axx2 + 2.0 * dm * s.axx_ax2 + 0.5 * dm * p.m * (s.ax4 - s.ax2 * s.ax2);
}

double Delta(const TailBlockParams& p, double x) {
  const double s = std::sqrt(p.b - p.a);
  const double log_den = p.m * special::folded_log_mgf(p.m, x, s);
  return 2.0 / (special::kSqrt2Pi * s) * std::exp(-0.5 * (x / s) * (x / s) - log_den);
}

double mixed_limit(const TailBlockParams& p, int k, double t, double x) {
  if (k < 1 || k % 2 == 0) throw DomainError("mixed_limit: k must be odd and >= 1");
  return tilted_sums(p, t, x, SumRequest{k, 0}).mixed;
}

double axx_sq_limit(const TailBlockParams& p, double t, double x) {
  return tilted_sums(p, t, x).axx2;
}

double even_moment(const TailBlockParams& p, int k, double t, double x) {
  if (k < 1) throw DomainError("even_moment: k must be >= 1");
  return tilted_sums(p, t, x, SumRequest{0, k}).even;
}

double appendix_identity_residual(double m, double a, double x) {
  if (!(a > 0.0)) throw DomainError("appendix_identity_residual: requires a > 0");
  return appendix_identity_residual(m, a, x, kink_rule(-x / a, 1.0, m * a));
}

double appendix_identity_residual(double m, double a, double x, const QuadratureRule& rule) {
  if (!(a > 0.0)) throw DomainError("appendix_identity_residual: requires a > 0");
  if (!(m >= 0.0)) throw DomainError("appendix_identity_residual: requires m >= 0");
  const double log_mgf = m * special::folded_log_mgf(m, x, a);
  double lhs = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double z = rule.nodes[j];
    const double y = x + a * z;
    const double sign = y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
    lhs += rule.weights[j] * z * sign * std::exp(m * std::fabs(y) - log_mgf);
  }
  const double rhs = std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * (x / a) * (x / a) - log_mgf) + m * a;
  return lhs - rhs;
}

}  // namespace parisi
