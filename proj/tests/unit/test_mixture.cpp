#include <cmath>

#include <gtest/gtest.h>

#include "parisi/errors.hpp"
#include "parisi/mixture.hpp"

using namespace parisi;

TEST(Mixture, XiValues) {
  EXPECT_DOUBLE_EQ(MixtureSpec::sk().xi(1.0), 0.5);
  EXPECT_DOUBLE_EQ(MixtureSpec::sk().xi(0.5), 0.125);
  const MixtureSpec mix({{2, 0.5}, {4, 0.25}}, 0.0);
  EXPECT_DOUBLE_EQ(mix.xi(1.0), 0.75);
}

TEST(Mixture, Derivatives) {
  const MixtureSpec sk = MixtureSpec::sk();
  EXPECT_DOUBLE_EQ(sk.xi_prime(1.0), 1.0);
  EXPECT_DOUBLE_EQ(sk.xi_dprime(1.0), 1.0);
  EXPECT_DOUBLE_EQ(MixtureSpec::pure(3).xi_dprime(0.5), 3.0);
  const MixtureSpec mix({{2, 0.7}, {3, 1.0}, {5, 0.1}}, 0.0);
  EXPECT_DOUBLE_EQ(mix.xi_dprime(0.0), 2 * 0.7);
  // Derivatives against centered differences.
  for (double s : {0.2, 0.5, 0.9}) {
    const double h = 1e-6;
    EXPECT_NEAR(mix.xi_prime(s), (mix.xi(s + h) - mix.xi(s - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(mix.xi_dprime(s), (mix.xi_prime(s + h) - mix.xi_prime(s - h)) / (2 * h), 1e-8);
  }
}

TEST(Mixture, CorrectionIntegral) {
  EXPECT_DOUBLE_EQ(MixtureSpec::sk().correction_integral(0.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(MixtureSpec::sk().correction_integral(0.3, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(MixtureSpec::pure(4).correction_integral(0.0, 1.0), 3.0);
  // Midpoint rule on t xi''(t).
  const MixtureSpec mix({{2, 0.7}, {3, 1.0}}, 0.0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double t = 0.2 + 0.6 * (i + 0.5) / n;
    sum += t * mix.xi_dprime(t) * 0.6 / n;
  }
  EXPECT_NEAR(mix.correction_integral(0.2, 0.8), sum, 1e-9);
}

TEST(Mixture, Validation) {
  EXPECT_THROW(MixtureSpec({{2, -1.0}}, 0.0), ConfigError);
  EXPECT_THROW(MixtureSpec({{1, 1.0}}, 0.0), ConfigError);
  EXPECT_THROW(MixtureSpec({{2, 0.0}}, 0.0), ConfigError);
  EXPECT_THROW(MixtureSpec({{40, 1.0}}, 0.0), ConfigError);
  EXPECT_THROW(MixtureSpec({{2, 1.0}}, std::nan("")), ConfigError);
  EXPECT_THROW(MixtureSpec::sk().xi(1.5), DomainError);
  EXPECT_DOUBLE_EQ(MixtureSpec({{2, 0.5}, {3, 0.25}}, 0.0).weighted_norm(), 4 * 0.5 + 8 * 0.25);
}

TEST(Mixture, JsonRoundTrip) {
  const MixtureSpec spec = MixtureSpec::from_json(R"({"coeffs": {"2": 0.5, "4": 0.25}, "h": 0.3})");
  EXPECT_DOUBLE_EQ(spec.h(), 0.3);
  EXPECT_EQ(spec.max_degree(), 4);
  const MixtureSpec back = MixtureSpec::from_json(spec.to_json());
  EXPECT_EQ(back.terms(), spec.terms());
  EXPECT_EQ(back.h(), spec.h());
  EXPECT_THROW(MixtureSpec::from_json("{"), ConfigError);
  EXPECT_THROW(MixtureSpec::from_json(R"({"coeffs": {"x": 1}})"), ConfigError);
  EXPECT_THROW(MixtureSpec::from_json(R"({"h": 1})"), ConfigError);
}
