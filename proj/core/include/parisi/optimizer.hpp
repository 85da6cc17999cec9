#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "parisi/chain.hpp"
#include "parisi/functional.hpp"
#include "parisi/mixture.hpp"
#include "parisi/order_param.hpp"

namespace parisi {

struct OptimOptions {
  ChainOptions chain{};
  /// Objective evaluations allowed per minimisation, restarts included.
  std::size_t budget = 4000;
  /// Simplex diameter, in the unconstrained coordinates, that counts as converged.
  double tolerance = 1e-7;
  /// Randomised restarts after the first descent.
  int restarts = 1;
  std::uint64_t seed = 1;
  /// Threads across restarts (and across betas in a sweep).
  int jobs = 1;
};

struct OptimResult {
  /// Number of plateau values of the step parameter.
  int k = 0;
  /// 0 at zero temperature.
  double beta = 0.0;
  std::variant<StepOrderParam, FiniteTempStepParam> param;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  double tolerance = 0.0;

  bool finite() const noexcept { return param.index() == 1; }
  const StepOrderParam& gamma() const { return std::get<StepOrderParam>(param); }
  const FiniteTempStepParam& alpha() const { return std::get<FiniteTempStepParam>(param); }
  std::string to_json() const;
};

/// Unconstrained coordinates for a zero-temperature step parameter with k
/// plateau values: m_0 = e^{u_0}, m_i = m_{i-1} + e^{u_i}, and
/// q_j = S_j / (1 + S_{k-1}) with S_j = sum_{l <= j} e^{w_l}. 2k - 1 reals.
StepOrderParam zero_from_coords(int k, const std::vector<double>& coords);
std::vector<double> zero_to_coords(const StepOrderParam& gamma);

/// Finite temperature, k plateau values with the last fixed at 1:
/// zeta_i = T_i / T_{k-1} with T cumulative sums of e^{v_i}, v_{k-1} = 0,
/// and the q's as above. 2k - 2 reals; k = 1 is alpha == 1.
FiniteTempStepParam finite_from_coords(int k, const std::vector<double>& coords);
std::vector<double> finite_to_coords(const FiniteTempStepParam& alpha);

/// Minimises the zero-temperature functional over k plateau values.
OptimResult minimize_zero(int k, const MixtureSpec& spec, const OptimOptions& options = {},
                          const std::optional<StepOrderParam>& initial = std::nullopt);

/// Minimises the finite-temperature functional over k plateau values.
OptimResult minimize_finite(int k, double beta, const MixtureSpec& spec,
                            const OptimOptions& options = {},
                            const std::optional<FiniteTempStepParam>& initial = std::nullopt);

struct EscalationStep {
  OptimResult result;
  /// Perturbation search on the previous optimum that produced the warm start.
  std::optional<PerturbationReport> report;
  /// Functional at the warm start, before refinement.
  std::optional<double> warm_value;
};

/// k = 1..k_max; each k + 1 starts from the perturbed k-optimum.
std::vector<EscalationStep> escalate(const MixtureSpec& spec, int k_max,
                                     const OptimOptions& options = {},
                                     const SearchOptions& search = {});

struct SweepRow {
  double beta = 0.0;
  OptimResult finite;
  double gap = 0.0;            // finite value minus zero-temperature value
  double entropy = 0.0;        // log 2 / beta
  double l1 = 0.0;             // L1 distance on [0, cut] between beta * alpha and gamma
};

struct BetaSweep {
  OptimResult zero;
  double cut = 0.95;
  std::vector<SweepRow> rows;

  /// Columns beta, finite_value, zero_value, gap, entropy, l1; 17 significant digits.
  std::string to_csv() const;
};

/// Zero-temperature k-optimum against finite-temperature (k+1)-optima at each
/// beta: the extra top plateau of alpha (zeta = 1) is the one pushed towards 1.
BetaSweep beta_sweep(const MixtureSpec& spec, int k, const std::vector<double>& betas,
                     const OptimOptions& options = {}, double cut = 0.95);

}  // namespace parisi
