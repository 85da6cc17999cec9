#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "parisi/quadrature.hpp"

using namespace parisi;

namespace {

double gaussian_moment(int k) {
  if (k % 2) return 0.0;
  double v = 1.0;
  for (int j = k - 1; j > 0; j -= 2) v *= j;
  return v;
}

}  // namespace

TEST(Quadrature, SmallRules) {
  const GaussHermiteRule one = build_rule(1);
  ASSERT_EQ(one.nodes.size(), 1u);
  EXPECT_EQ(one.nodes[0], 0.0);
  EXPECT_EQ(one.weights[0], 1.0);
  EXPECT_NEAR(expect(build_rule(2), [](double z) { return z * z; }), 1.0, 1e-15);
  EXPECT_NEAR(expect(build_rule(3), [](double z) { return z * z * z * z; }), 3.0, 1e-12);
}

TEST(Quadrature, RuleInvariants) {
  for (int order : {2, 5, 20, 40, 80, 160, 512}) {
    const GaussHermiteRule& r = cached_rule(order);
    double sum = 0.0, first = 0.0, second = 0.0;
    for (int i = 0; i < order; ++i) {
      sum += r.weights[i];
      first += r.weights[i] * r.nodes[i];
      second += r.weights[i] * r.nodes[i] * r.nodes[i];
      EXPECT_GT(r.weights[i], 0.0);
      if (i > 0) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
      EXPECT_EQ(r.nodes[i], -r.nodes[order - 1 - i]);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12) << order;
    EXPECT_NEAR(first, 0.0, 1e-12) << order;
    EXPECT_NEAR(second, 1.0, 1e-10) << order;
  }
}

TEST(Quadrature, PolynomialExactness) {
  // Independent oracle: double-factorial moments.
  for (int order : {4, 10, 20}) {
    for (int k = 0; k <= 2 * order - 1 && k <= 24; ++k) {
      const GaussHermiteRule& r = cached_rule(order);
      const double got = expect(r, [k](double z) { return std::pow(z, k); });
      // Odd moments cancel to zero, so the scale is the absolute moment.
      const double scale = expect(r, [k](double z) { return std::pow(std::fabs(z), k); });
      EXPECT_NEAR(got, gaussian_moment(k), 1e-13 * order * std::max(1.0, scale))
          << "order " << order << " k " << k;
    }
  }
}

TEST(Quadrature, ExpectationExamples) {
  EXPECT_NEAR(expect(cached_rule(40), [](double z) { return z; }), 0.0, 1e-14);
  // Plain Gauss-Hermite stalls near 1e-3 on |z|; the composite rule is needed for 1e-6.
  const double folded = std::sqrt(2.0 / std::numbers::pi);
  EXPECT_GT(std::fabs(expect(cached_rule(80), [](double z) { return std::fabs(z); }) - folded), 1e-4);
  EXPECT_NEAR(expect(kink_rule(0.0, 1.0), [](double z) { return std::fabs(z); }), folded, 1e-6);
  EXPECT_NEAR(expect(cached_rule(20), [](double z) { return std::exp(z); }), std::exp(0.5), 1e-10);
  EXPECT_THROW(expect(cached_rule(4), [](double) { return std::nan(""); }), EvaluationError);
}

TEST(Quadrature, KinkRuleHandlesAbsoluteValue) {
  // Gauss-Hermite converges slowly on |z|; the composite rule does not.
  const QuadratureRule r = kink_rule(0.0, 1.0);
  EXPECT_NEAR(expect(r, [](double z) { return std::fabs(z); }), std::sqrt(2.0 / std::numbers::pi),
              1e-11);
  const QuadratureRule shifted = kink_rule(-0.7, 1.0);
  const double x = 0.7;
  const double exact = x * std::erf(x / std::numbers::sqrt2) +
                       std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * x * x);
  EXPECT_NEAR(expect(shifted, [x](double z) { return std::fabs(x + z); }), exact, 1e-11);
}

TEST(Quadrature, KinkRuleTiltedExponential) {
  // E e^{m|z|} = 2 e^{m^2/2} Phi(m).
  for (double m : {1.0, 4.0, 10.0}) {
    const QuadratureRule r = kink_rule(0.0, 1.0, m);
    const double exact = std::exp(0.5 * m * m) * std::erfc(-m / std::numbers::sqrt2);
    EXPECT_NEAR(expect(r, [m](double z) { return std::exp(m * std::fabs(z)); }) / exact, 1.0, 1e-12)
        << m;
  }
}

TEST(Quadrature, NarrowFeatureWidth) {
  // A boundary layer of width 1e-3 around the kink: E sqrt(z^2 + w^2).
  const double w = 1e-3;
  const QuadratureRule coarse = kink_rule(0.0, w);
  const QuadratureRule fine = kink_rule(0.0, w, 0.0, PanelLayout{16, 0.5, 10.0});
  auto f = [w](double z) { return std::sqrt(z * z + w * w); };
  EXPECT_NEAR(expect(coarse, f), expect(fine, f), 1e-12);
}

TEST(Quadrature, LogMoment) {
  const std::vector<double> w{0.25, 0.5, 0.25};
  const std::vector<double> same{1.7, 1.7, 1.7};
  for (double m : {0.0, 1e-9, 0.3, 50.0}) EXPECT_NEAR(log_moment(m, same, w), 1.7, 1e-15);

  const std::vector<double> narrow{-0.1, 0.05, 0.2};
  EXPECT_NEAR(log_moment(1e-6, narrow, w), 0.05, 1e-8);

  // Small m: mean plus m Var / 2.
  const std::vector<double> v{-1.0, 0.5, 2.0};
  const double mean = 0.25 * -1.0 + 0.5 * 0.5 + 0.25 * 2.0;
  const double var = 0.25 * 2.25 + 0.25 * 2.25;
  EXPECT_NEAR(log_moment(1e-6, v, w), mean + 0.5e-6 * var, 1e-12);
  EXPECT_EQ(log_moment(0.0, v, w), mean);

  const std::vector<double> big{0.0, 100.0};
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(log_moment(50.0, big, half), 100.0 + std::log(0.5) / 50.0, 1e-12);
  EXPECT_TRUE(std::isfinite(log_moment(1e4, big, half)));

  // Continuity across the pivot switch at m (vmax - vmin) = 1.
  const double m_switch = 1.0 / 3.0;
  EXPECT_NEAR(log_moment(m_switch * (1 - 1e-12), v, w), log_moment(m_switch * (1 + 1e-12), v, w),
              1e-12);
  EXPECT_THROW(log_moment(-1.0, v, w), DomainError);
  EXPECT_THROW(log_moment(1.0, v, half), DomainError);
}

TEST(Quadrature, OrderBounds) {
  EXPECT_THROW(build_rule(0), ConfigError);
  EXPECT_THROW(build_rule(513), ConfigError);
  EXPECT_THROW(gauss_legendre(65), ConfigError);
}
