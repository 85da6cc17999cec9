#pragma once

#include "parisi/quadrature.hpp"

namespace parisi {

/// Last-interval block: time runs over [a, b] in xi' units, the boundary at
/// t = b is |x|, the block exponent is m_prime and the level above it has
/// exponent m. Requires 0 <= a < b and 0 <= m < m_prime (m = 0 is the
/// plain-mean convention used when the block sits on top of gamma == 0).
struct TailBlockParams {
  double a = 0.0;
  double b = 1.0;
  double m = 1.0;
  double m_prime = 2.0;
};

/// Throws DomainError on a violated invariant.
void require_valid(const TailBlockParams& p);

/// log g(t, x) = (b-t) m'^2/2 + m' x + log Phi(m' sqrt(b-t) + x/sqrt(b-t)).
double log_g(const TailBlockParams& p, double t, double x);

/// A(t, x) = (1/m') log(g(t,x) + g(t,-x)); A(b, x) = |x|.
double A(const TailBlockParams& p, double t, double x);
double A_x(const TailBlockParams& p, double t, double x);
double A_xx(const TailBlockParams& p, double t, double x);
double A_t(const TailBlockParams& p, double t, double x);
double Gamma(const TailBlockParams& p, double t, double x);

/// A_t + (A_xx + m' A_x^2)/2 from the closed forms.
double pde_residual(const TailBlockParams& p, double t, double x);

/// The same residual with every derivative of A replaced by a centered
/// difference of step h.
double pde_residual_fd(const TailBlockParams& p, double t, double x, double h = 1e-4);

/// Composite rule for expectations over y = x + z sqrt(t - a): split at the
/// kink y = 0, graded to the feature width min(sqrt(b-t), 1/m').
QuadratureRule tail_rule(const TailBlockParams& p, double t, double x,
                         const PanelLayout& layout = {});

/// B(t,x) = (1/m) log E exp(m A(t, x + z sqrt(t-a))).
double B(const TailBlockParams& p, double t, double x);
double B(const TailBlockParams& p, double t, double x, const QuadratureRule& rule);

/// V(t,x,y) = exp(m (A(t,y) - B(t,x))).
double V(const TailBlockParams& p, double t, double x, double y);

/// C(t,x) = E A_x^2(t, x + z sqrt(t-a)) V.
double C(const TailBlockParams& p, double t, double x);
double C(const TailBlockParams& p, double t, double x, const QuadratureRule& rule);

/// B and C from one pass over a shared rule.
struct TailMoments {
  double B = 0.0;
  double C = 0.0;
};
TailMoments tail_moments(const TailBlockParams& p, double t, double x,
                         const PanelLayout& layout = {});

/// ((m - m')/2) C(t, x).
double B_t_formula(const TailBlockParams& p, double t, double x);

/// E(A_xx^2 + 2(m-m') A_xx A_x^2) V + ((m-m') m / 2)(E A_x^4 V - (E A_x^2 V)^2).
double C_t_formula(const TailBlockParams& p, double t, double x);

/// (2/sqrt(2 pi (b-a))) exp(-x^2/(2(b-a))) / E exp(m |x + z sqrt(b-a)|).
double Delta(const TailBlockParams& p, double x);

/// E A_x^{k-1} A_xx V for odd k >= 1; DomainError for even k.
double mixed_limit(const TailBlockParams& p, int k, double t, double x);

/// E A_xx^2 V.
double axx_sq_limit(const TailBlockParams& p, double t, double x);

/// E A_x^{2k} V for k >= 1; lies in [0, 1] and tends to 1 as t -> b.
double even_moment(const TailBlockParams& p, int k, double t, double x);

/// (E z e^{m|x+az|} sign(x+az) - sqrt(2/pi) e^{-x^2/(2a^2)} - m a E e^{m|x+az|})
/// divided by E e^{m|x+az|}, with the left side by quadrature and the
/// normaliser in closed form. The division keeps the residual meaningful
/// when E e^{m|x+az|} is large. Requires a > 0, m >= 0.
double appendix_identity_residual(double m, double a, double x);
double appendix_identity_residual(double m, double a, double x, const QuadratureRule& rule);

}  // namespace parisi
