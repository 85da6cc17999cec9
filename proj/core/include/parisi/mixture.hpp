#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace parisi {

/// Mixed p-spin model: covariance function xi(s) = sum_p c_p^2 s^p and the
/// external field h. Coefficients are stored squared, exactly as supplied.
class MixtureSpec {
 public:
  static constexpr int kDefaultMaxDegree = 32;

  /// Throws ConfigError on a negative coefficient, degree < 2, degree above
  /// max_degree, an all-zero mixture, or a non-finite field.
  MixtureSpec(std::map<int, double> coeffs_squared, double h,
              int max_degree = kDefaultMaxDegree);

  /// Sherrington-Kirkpatrick: xi(s) = s^2 / 2.
  static MixtureSpec sk(double h = 0.0);
  /// Pure p-spin with c_p^2 = 1.
  static MixtureSpec pure(int p, double h = 0.0);

  /// Parses {"coeffs": {"2": 0.5, "4": 0.25}, "h": 0.0}. "h" defaults to 0.
  static MixtureSpec from_json(std::string_view text,
                               int max_degree = kDefaultMaxDegree);
  std::string to_json() const;

  double h() const noexcept { return h_; }
  int max_degree() const noexcept { return terms_.back().first; }
  const std::vector<std::pair<int, double>>& terms() const noexcept { return terms_; }

  /// sum_p 2^p c_p^2, finite for any finite mixture.
  double weighted_norm() const;

  double xi(double s) const;
  double xi_prime(double s) const;
  double xi_dprime(double s) const;

  /// Integral of t xi''(t) over [u, v]: sum_p c_p^2 (p - 1)(v^p - u^p).
  double correction_integral(double u, double v) const;

  /// Same spec with a different external field.
  MixtureSpec with_field(double h) const;

 private:
  std::vector<std::pair<int, double>> terms_;  // ascending degree, c_p^2 > 0 only
  double h_;
  int degree_cap_;
};

// Free-function spellings of the calculus, for symmetry with the rest of the API.
inline double eval_xi(const MixtureSpec& spec, double s) { return spec.xi(s); }
inline double eval_xi_prime(const MixtureSpec& spec, double s) { return spec.xi_prime(s); }
inline double eval_xi_dprime(const MixtureSpec& spec, double s) { return spec.xi_dprime(s); }
inline double correction_integral(const MixtureSpec& spec, double u, double v) {
  return spec.correction_integral(u, v);
}

}  // namespace parisi
