#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace parisi {

/// Zero-temperature order parameter gamma(t) = m_i on [q_i, q_{i+1}), with
/// q_{n+1} := 1. Requires 0 = q_0 < ... < q_n < 1 and 0 <= m_0 < ... < m_n.
/// gamma == 0 is encoded as qs = {0}, ms = {0}.
struct StepOrderParam {
  std::vector<double> qs;
  std::vector<double> ms;

  std::size_t levels() const noexcept { return qs.size(); }
  /// Index n of the top plateau.
  std::size_t top() const noexcept { return qs.size() - 1; }
  double value_at(double t) const;

  static StepOrderParam zero() { return {{0.0}, {0.0}}; }
  static StepOrderParam constant(double m) { return {{0.0}, {m}}; }

  bool operator==(const StepOrderParam&) const = default;
};

/// Finite-temperature order parameter: a CDF alpha(t) = zeta_i on
/// [q_i, q_{i+1}) and 1 on [q_n, 1]. Requires 0 = q_0 < ... < q_n <= 1 and
/// 0 <= zeta_0 <= ... <= zeta_n = 1.
struct FiniteTempStepParam {
  std::vector<double> qs;
  std::vector<double> zetas;

  std::size_t levels() const noexcept { return qs.size(); }
  double value_at(double t) const;

  /// alpha == 1 on [0, 1].
  static FiniteTempStepParam one() { return {{0.0}, {1.0}}; }

  bool operator==(const FiniteTempStepParam&) const = default;
};

/// gamma with one extra jump to m_next at q in (q_n, 1).
struct PerturbedParam {
  StepOrderParam base;
  double q = 0.0;
  double m_next = 0.0;

  /// The perturbed step function as a plain StepOrderParam.
  StepOrderParam materialize() const;
};

/// Strictness tolerance: neighbouring q's closer than this are a violation.
inline constexpr double kAtomMergeTolerance = 1e-12;

/// Every violated invariant, in a human-readable form; empty when valid.
std::vector<std::string> validate(const StepOrderParam& gamma);
std::vector<std::string> validate(const FiniteTempStepParam& alpha);

/// Throws DomainError listing the violations.
void require_valid(const StepOrderParam& gamma);
void require_valid(const FiniteTempStepParam& alpha);

/// Adds the jump; throws DomainError naming the violated bound unless
/// q_n < q < 1 and m_next > m_n.
PerturbedParam perturb(const StepOrderParam& base, double q, double m_next);

/// Integral over [0, 1] of |gamma_1 - gamma_2|, exact on the merged breakpoints.
double l1_distance(const StepOrderParam& a, const StepOrderParam& b);

/// Same distance restricted to [0, upper].
double l1_distance(const StepOrderParam& a, const StepOrderParam& b, double upper);

/// A finite-temperature parameter scaled by beta, viewed as a step function
/// on [0, 1); used to compare beta * alpha against a zero-temperature gamma.
StepOrderParam rescale(const FiniteTempStepParam& alpha, double beta);

/// Text form "q0:m0,q1:m1,..."; shortest form that round-trips bit-exactly.
std::string to_string(const StepOrderParam& gamma);
std::string to_string(const FiniteTempStepParam& alpha);

/// Parses "q0:m0,..." or a JSON array of [q, m] pairs. Throws ConfigError on
/// malformed text. The result is not validated.
StepOrderParam parse_step_param(std::string_view text);
FiniteTempStepParam parse_finite_param(std::string_view text);

}  // namespace parisi
