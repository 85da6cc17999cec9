#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "parisi/mixture.hpp"
#include "parisi/order_param.hpp"
#include "parisi/quadrature.hpp"

namespace parisi {

/// How the innermost level (the one ending at the |x| boundary) is handled.
enum class TerminalMode {
  kAnalytic,    // closed form (1/m) log E e^{m|x + s z|}
  kQuadrature,  // composite rule around the kink, boundary |x| evaluated pointwise
};

struct ChainOptions {
  /// Gauss-Hermite order for levels whose integrand is smooth on the level scale.
  int order = kDefaultNestedOrder;
  /// Cost guard on the number of plateau levels n + 1.
  std::size_t max_levels = 6;
  /// A level uses Gauss-Hermite when (feature width below it) / (level sigma)
  /// is at least this ratio, and the composite kink rule otherwise. Infinity
  /// forces the composite rule everywhere.
  double gh_width_ratio = 1.0;
  PanelLayout layout{};
  TerminalMode terminal = TerminalMode::kAnalytic;
  /// Worker threads for the outermost level; results do not depend on it.
  int jobs = 1;

  static ChainOptions with_order(int order) {
    ChainOptions o;
    o.order = order;
    return o;
  }
};

struct ChainEvaluation {
  double psi = 0.0;
  /// v_i = xi'(q_{i+1}) - xi'(q_i), one per plateau, q_{n+1} = 1.
  std::vector<double> level_variances;
  /// Per quadrature level, the largest |E_{z_i} W_i - 1| seen.
  std::vector<double> weight_defects;
  /// Tilted expectation of the leaf's auxiliary value (phi for the perturbed chain).
  double aux = 0.0;
  std::size_t leaf_evaluations = 0;
};

/// One level of the recursion: Gaussian increment sigma * z, exponent m, and
/// the smallest length scale of the function handed up from below.
struct ChainLevel {
  double sigma = 0.0;
  double exponent = 0.0;
  double child_width = 0.0;  // 0 marks a genuine kink (|x| itself)
};

struct LeafValue {
  double value = 0.0;
  double aux = 0.0;
};

using LeafFn = std::function<LeafValue(double)>;

/// Backward recursion X_i(x) = (1/m_i) log E X_{i+1}(x + sigma_i z), ending in
/// `leaf`, evaluated at x = h. Depth-first with per-depth scratch; the
/// outermost level may be split across `options.jobs` threads and is always
/// reduced in node order.
ChainEvaluation run_chain(const std::vector<ChainLevel>& levels, double h, const LeafFn& leaf,
                          const ChainOptions& options);

/// Psi_gamma(0, h) with boundary |x|.
ChainEvaluation psi_zero(const StepOrderParam& gamma, const MixtureSpec& spec,
                         const ChainOptions& options = {});

/// Psi_{gamma_q}(0, h); the last two levels are the closed-form tail block.
/// `aux` of the result is phi(q).
ChainEvaluation psi_zero_perturbed(const PerturbedParam& p, const MixtureSpec& spec,
                                   const ChainOptions& options = {});

/// Psi_{alpha,beta}(0, h) with boundary log cosh(beta x) / beta.
ChainEvaluation psi_finite(const FiniteTempStepParam& alpha, double beta, const MixtureSpec& spec,
                           const ChainOptions& options = {});

}  // namespace parisi
