#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parisi/chain.hpp"
#include "parisi/mixture.hpp"
#include "parisi/order_param.hpp"

namespace parisi {

/// A functional value split into its chain term and its correction term.
struct ParisiBreakdown {
  double psi = 0.0;         // Psi at (0, h), including log 2 / beta at finite temperature
  double correction = 0.0;  // the subtracted integral term
  double value = 0.0;       // psi - correction
};

/// Zero temperature: Psi_gamma(0,h) - (1/2) sum_i m_i int_{q_i}^{q_{i+1}} t xi''(t) dt.
ParisiBreakdown parisi_zero_breakdown(const StepOrderParam& gamma, const MixtureSpec& spec,
                                      const ChainOptions& options = {});
double parisi_zero(const StepOrderParam& gamma, const MixtureSpec& spec,
                   const ChainOptions& options = {});

/// Finite temperature: log 2/beta + Psi_{alpha,beta}(0,h) - (beta/2) int alpha(s) s xi''(s) ds.
ParisiBreakdown parisi_finite_breakdown(const FiniteTempStepParam& alpha, double beta,
                                        const MixtureSpec& spec, const ChainOptions& options = {});
double parisi_finite(const FiniteTempStepParam& alpha, double beta, const MixtureSpec& spec,
                     const ChainOptions& options = {});

/// The functional at gamma_q together with phi(q) and the q-derivative
/// (xi''(q)/2)(m_next - m_n)(q - phi(q)); all three come from one chain pass.
struct PerturbedEvaluation {
  double value = 0.0;
  double phi = 0.0;
  double dq = 0.0;
};
PerturbedEvaluation evaluate_perturbed(const PerturbedParam& p, const MixtureSpec& spec,
                                       const ChainOptions& options = {});

double parisi_perturbed(const PerturbedParam& p, const MixtureSpec& spec,
                        const ChainOptions& options = {});
double phi(const PerturbedParam& p, const MixtureSpec& spec, const ChainOptions& options = {});
double dq_parisi(const PerturbedParam& p, const MixtureSpec& spec,
                 const ChainOptions& options = {});

struct PerturbationReport {
  StepOrderParam base;
  double m_next = 0.0;
  std::vector<double> q_grid;
  double p_base = 0.0;
  std::vector<double> p_values;
  std::vector<double> dq_values;
  std::vector<double> phi_values;
  std::optional<double> eta;
  bool success = false;
  /// Every m_next tried, with the length of its trailing run of q's below p_base.
  std::vector<double> tried_m;
  std::vector<std::size_t> tried_suffix;

  /// Column-name line, then q, P_gamma_q, dq_P, phi rows with 17 significant digits.
  std::string to_csv() const;
  std::string to_json() const;
};

struct SearchOptions {
  std::vector<double> m_grid;  // empty: default_m_grid(base)
  std::vector<double> q_grid;  // empty: default_q_grid(base)
  /// Shortest trailing run of grid points below p_base accepted as a certificate.
  std::size_t min_suffix = 4;
  /// Threads across q-grid points (each chain then runs single-threaded).
  int jobs = 1;
};

/// max(m_n, 1) * {2, 4, ..., 2^10}.
std::vector<double> default_m_grid(const StepOrderParam& base);

/// 1 - (1 - q_n) 2^{-j}, j = 1..depth.
std::vector<double> default_q_grid(const StepOrderParam& base, int depth = 14);

/// Tries m_next over the m-grid in order and returns the first whose values
/// at the trailing q-grid points all lie strictly below P(gamma). When none
/// does, the report holds the m_next with the longest such run and success = false.
PerturbationReport theorem3_search(const StepOrderParam& base, const MixtureSpec& spec,
                                   const ChainOptions& options = {},
                                   const SearchOptions& search = {});

}  // namespace parisi
