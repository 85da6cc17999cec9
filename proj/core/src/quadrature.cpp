#include "parisi/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <mutex>
#include <numeric>

#include "parisi/special.hpp"

namespace parisi {

namespace {

// Orthonormal Hermite recurrence (weight: standard normal density), scaled
// to keep magnitudes bounded. Returns p_n(x) / p_{n-1}(x) up to a common factor.
void hermite_pair(int n, double x, double& pn, double& pn1) {
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
    if (std::fabs(cur) > 1e100) {
      prev *= 1e-100;
      cur *= 1e-100;
    }
  }
  pn = cur;
  pn1 = prev;
}

QuadratureRule compute_gauss_legendre(int points) {
  QuadratureRule rule;
  if (points == 1) return {{0.0}, {2.0}};
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    rule.nodes[points - 1 - i] = x;
    rule.weights[points - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

GaussHermiteRule build_rule(int order) {
  if (order < 1 || order > kMaxHermiteOrder) {
    throw ConfigError("build_rule: order " + std::to_string(order) + " outside [1, " +
                      std::to_string(kMaxHermiteOrder) + "]");
  }
  GaussHermiteRule rule;
  rule.order = order;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {1.0};
    return rule;
  }

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw EvaluationError("build_rule: tridiagonal eigensolver failed", order);
  }

  std::vector<double> nodes(order);
  std::vector<double> weights(order);
  for (int i = 0; i < order; ++i) {
    double x = solver.eigenvalues()(i);
    for (int iter = 0; iter < 4; ++iter) {
      double pn = 0.0;
      double pn1 = 0.0;
      hermite_pair(order, x, pn, pn1);
      if (pn1 == 0.0 || !std::isfinite(pn) || !std::isfinite(pn1)) break;
      const double dx = pn / (std::sqrt(static_cast<double>(order)) * pn1);
      x -= dx;
      if (std::fabs(dx) < 1e-15 * (1.0 + std::fabs(x))) break;
    }
    nodes[i] = x;
    const double v0 = solver.eigenvectors()(0, i);
    weights[i] = v0 * v0;
  }

  // Sort, then enforce exact symmetry about zero.
  std::vector<int> idx(order);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return nodes[a] < nodes[b]; });
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = nodes[idx[i]];
    rule.weights[i] = weights[idx[i]];
  }
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;

  // Pair up symmetric terms so the sum itself is symmetric.
  double total = 0.0;
  for (int i = 0; i < order / 2; ++i) total += 2.0 * rule.weights[i];
  if (order % 2 == 1) total += rule.weights[order / 2];
  for (double& w : rule.weights) w /= total;
  return rule;
}

const GaussHermiteRule& cached_rule(int order) {
  if (order < 1 || order > kMaxHermiteOrder) {
    throw ConfigError("cached_rule: order " + std::to_string(order) + " outside [1, " +
                      std::to_string(kMaxHermiteOrder) + "]");
  }
  static std::array<GaussHermiteRule, kMaxHermiteOrder + 1> cache;
  static std::array<std::once_flag, kMaxHermiteOrder + 1> flags;
  std::call_once(flags[order], [order] { cache[order] = build_rule(order); });
  return cache[order];
}

const QuadratureRule& gauss_legendre(int points) {
  constexpr int kMax = 64;
  if (points < 1 || points > kMax) {
    throw ConfigError("gauss_legendre: points " + std::to_string(points) +
                      " outside [1, 64]");
  }
  static std::array<QuadratureRule, kMax + 1> cache;
  static std::array<std::once_flag, kMax + 1> flags;
  std::call_once(flags[points], [points] { cache[points] = compute_gauss_legendre(points); });
  return cache[points];
}

double log_moment(double m, std::span<const double> values, std::span<const double> weights) {
  if (!(m >= 0.0)) throw DomainError("log_moment: exponent m must be >= 0");
  if (values.size() != weights.size() || values.empty()) {
    throw DomainError("log_moment: values and weights must be non-empty and equal length");
  }
  if (m == 0.0) {
    double mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) mean += weights[i] * values[i];
    return mean;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double vmin = *lo;
  const double vmax = *hi;
  if (m * (vmax - vmin) < 1.0) {
    // Narrow spread: pivot on the mean, every exponent lies in (-1, 1) and
    // log1p keeps the m -> 0 limit smooth.
    double mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) mean += weights[i] * values[i];
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      s += weights[i] * std::expm1(m * (values[i] - mean));
    }
    return mean + std::log1p(s) / m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * std::exp(m * (values[i] - vmax));
  return vmax + std::log(s) / m;
}

void build_kink_rule(double kink, double width, double tilt, const PanelLayout& layout,
                     QuadratureRule& out) {
  out.clear();
  const QuadratureRule& gl = gauss_legendre(layout.points_per_panel);
  const double hi = layout.tail_extent + std::max(0.0, tilt);
  const double lo = -hi;
  const double cap = layout.max_panel;

  auto add_panel = [&](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t k = 0; k < gl.size(); ++k) {
      const double z = mid + half * gl.nodes[k];
      out.nodes.push_back(z);
      out.weights.push_back(half * gl.weights[k] * special::normal_pdf(z));
    }
  };

  if (!(kink > lo && kink < hi) || !(width > 0.0)) {
    const int panels = static_cast<int>(std::ceil((hi - lo) / cap));
    const double h = (hi - lo) / panels;
    for (int i = 0; i < panels; ++i) add_panel(lo + i * h, lo + (i + 1) * h);
    return;
  }

  // Left side: built outward from the kink, then reversed so nodes ascend.
  double a = kink;
  double h = std::min(0.5 * width, cap);
  while (a > lo) {
    const double b = std::max(a - h, lo);
    add_panel(b, a);
    a = b;
    h = std::min(2.0 * h, cap);
  }
  std::reverse(out.nodes.begin(), out.nodes.end());
  std::reverse(out.weights.begin(), out.weights.end());

  a = kink;
  h = std::min(0.5 * width, cap);
  while (a < hi) {
    const double b = std::min(a + h, hi);
    add_panel(a, b);
    a = b;
    h = std::min(2.0 * h, cap);
  }
}

}  // namespace parisi
