#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "parisi/errors.hpp"

namespace parisi {

/// Nodes and weights approximating E f(z) for a standard Gaussian z.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  void clear() noexcept {
    nodes.clear();
    weights.clear();
  }
};

/// Gauss-Hermite rule for the standard normal density (probabilists' weight).
/// Invariants: weights positive and summing to 1, nodes strictly increasing
/// and symmetric about 0; exact for polynomials of degree <= 2*order - 1.
struct GaussHermiteRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  QuadratureRule as_rule() const { return {nodes, weights}; }
};

inline constexpr int kMaxHermiteOrder = 512;
inline constexpr int kDefaultSingleLevelOrder = 80;
inline constexpr int kDefaultNestedOrder = 40;

/// Golub-Welsch on the symmetric tridiagonal Jacobi matrix, followed by a
/// Newton polish of the nodes, exact symmetrisation and renormalisation.
/// Throws ConfigError unless 1 <= order <= 512.
GaussHermiteRule build_rule(int order);

/// Cached rule; safe to call concurrently.
const GaussHermiteRule& cached_rule(int order);

/// Gauss-Legendre nodes/weights on [-1, 1]; cached, 1 <= points <= 64.
const QuadratureRule& gauss_legendre(int points);

/// sum_i w_i f(node_i). Throws EvaluationError (carrying the node) when f is
/// not finite at a node.
template <class Rule, class F>
double expect(const Rule& rule, F&& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double value = f(rule.nodes[i]);
    if (!std::isfinite(value)) {
      throw EvaluationError("expect: integrand not finite at node " +
                                std::to_string(rule.nodes[i]),
                            rule.nodes[i]);
    }
    total += rule.weights[i] * value;
  }
  return total;
}

/// (1/m) log sum_i w_i exp(m v_i) for m > 0 and sum_i w_i v_i for m = 0.
/// Pivots on the weighted mean with expm1/log1p when m (v_max - v_min) < 1,
/// which keeps the m -> 0+ limit continuous, and on v_max otherwise, which
/// is overflow-free for large m.
/// Throws DomainError for m < 0 or mismatched spans.
double log_moment(double m, std::span<const double> values, std::span<const double> weights);

/// Shape of the composite rule built around a kink.
struct PanelLayout {
  int points_per_panel = 8;
  double max_panel = 2.0;    // panel width cap, in standard-normal units
  double tail_extent = 8.0;  // half-width of the integration range before tilting
};

/// Composite Gauss-Legendre rule for E f(z) where f is smooth except for a
/// boundary layer of width `width` around z = `kink`. Panels start at
/// width/2 on each side of the kink and double until `max_panel`; the range
/// is [-(tail_extent + tilt), tail_extent + tilt], where `tilt` bounds the
/// exponential growth rate of the integrand (e.g. m * sigma for exp(m |x + sigma z|)).
/// The rule is written into `out` (storage is reused).
void build_kink_rule(double kink, double width, double tilt, const PanelLayout& layout,
                     QuadratureRule& out);

inline QuadratureRule kink_rule(double kink, double width, double tilt = 0.0,
                                const PanelLayout& layout = {}) {
  QuadratureRule out;
  build_kink_rule(kink, width, tilt, layout, out);
  return out;
}

}  // namespace parisi
