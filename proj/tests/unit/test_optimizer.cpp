#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "parisi/errors.hpp"
#include "parisi/optimizer.hpp"

using namespace parisi;

namespace {

// Independent 1-D oracle: coarse scan over m in (0, 20], then golden section.
double constant_gamma_minimum(const MixtureSpec& spec) {
  auto f = [&](double m) { return parisi_zero(StepOrderParam::constant(m), spec); };
  double best_m = 0.05, best = f(best_m);
  for (double m = 0.1; m <= 20.0; m += 0.05) {
    const double v = f(m);
    if (v < best) best = v, best_m = m;
  }
  double lo = best_m - 0.05, hi = best_m + 0.05;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 80; ++i) {
    const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    (f(a) < f(b) ? hi : lo) = (f(a) < f(b) ? b : a);
  }
  return f(0.5 * (lo + hi));
}

void expect_consistent(const OptimResult& r, const MixtureSpec& spec) {
  if (r.finite()) {
    EXPECT_TRUE(validate(r.alpha()).empty());
    EXPECT_NEAR(r.value, parisi_finite(r.alpha(), r.beta, spec), 1e-10);
  } else {
    EXPECT_TRUE(validate(r.gamma()).empty());
    EXPECT_NEAR(r.value, parisi_zero(r.gamma(), spec), 1e-10);
  }
}

}  // namespace

TEST(Optimizer, CoordinateRoundTrip) {
  const StepOrderParam g{{0.0, 0.3, 0.75}, {0.4, 1.1, 5.0}};
  const StepOrderParam back = zero_from_coords(3, zero_to_coords(g));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(back.qs[i], g.qs[i], 1e-14);
    EXPECT_NEAR(back.ms[i], g.ms[i], 1e-14);
  }
  EXPECT_EQ(zero_to_coords(g).size(), 5u);

  const FiniteTempStepParam a{{0.0, 0.2, 0.6}, {0.1, 0.45, 1.0}};
  const FiniteTempStepParam fa = finite_from_coords(3, finite_to_coords(a));
  EXPECT_EQ(finite_to_coords(a).size(), 4u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(fa.qs[i], a.qs[i], 1e-14);
    EXPECT_NEAR(fa.zetas[i], a.zetas[i], 1e-14);
  }
  // Any real vector maps to a valid parameter.
  EXPECT_TRUE(validate(zero_from_coords(3, {-30.0, 40.0, -5.0, 2.0, -3.0})).empty());
}

TEST(Optimizer, OneLevelMatchesScanOracle) {
  for (double h : {0.0, 0.3}) {
    const MixtureSpec spec = MixtureSpec::sk(h);
    const OptimResult r = minimize_zero(1, spec);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, constant_gamma_minimum(spec), 1e-8);
    expect_consistent(r, spec);
  }
  EXPECT_LT(minimize_zero(1, MixtureSpec::sk()).value, 0.7978846);
}

TEST(Optimizer, NestingAndRestartInvariance) {
  const MixtureSpec spec = MixtureSpec::sk();
  const OptimResult one = minimize_zero(1, spec);
  OptimOptions o;
  const OptimResult two = minimize_zero(2, spec, o);
  EXPECT_LE(two.value, one.value + 1e-9);
  EXPECT_LT(two.value, one.value - 1e-4);
  expect_consistent(two, spec);
  for (std::uint64_t seed = 2; seed <= 11; ++seed) {
    o.seed = seed;
    EXPECT_NEAR(minimize_zero(2, spec, o).value, two.value, 2e-6) << seed;
  }
}

TEST(Optimizer, Deterministic) {
  OptimOptions o;
  o.restarts = 2;
  const OptimResult a = minimize_zero(2, MixtureSpec::sk(0.3), o);
  o.jobs = 3;
  const OptimResult b = minimize_zero(2, MixtureSpec::sk(0.3), o);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.gamma(), b.gamma());
}

TEST(Optimizer, FiniteTemperatureRegimes) {
  const MixtureSpec spec = MixtureSpec::sk();
  // Replica symmetric at high temperature: one more plateau buys nothing.
  const OptimResult rs_hot = minimize_finite(2, 0.5, spec);
  const OptimResult rsb_hot = minimize_finite(3, 0.5, spec);
  EXPECT_LT(rs_hot.value - rsb_hot.value, 1e-6);
  expect_consistent(rs_hot, spec);
  // Low temperature: the extra plateau helps.
  const OptimResult rs_cold = minimize_finite(2, 4.0, spec);
  const OptimResult rsb_cold = minimize_finite(3, 4.0, spec, {}, std::nullopt);
  EXPECT_GT(rs_cold.value - rsb_cold.value, 1e-5);
  EXPECT_LE(rsb_cold.value, rs_cold.value + 1e-9);
  expect_consistent(rsb_cold, spec);
}

TEST(Optimizer, EscalationWarmStartsImprove) {
  const auto steps = escalate(MixtureSpec::sk(), 2);
  ASSERT_EQ(steps.size(), 2u);
  ASSERT_TRUE(steps[1].report.has_value());
  EXPECT_TRUE(steps[1].report->success);
  ASSERT_TRUE(steps[1].warm_value.has_value());
  EXPECT_LT(*steps[1].warm_value, steps[0].result.value);
  EXPECT_LT(steps[1].result.value, steps[0].result.value);
  const auto j = nlohmann::json::parse(steps[1].result.to_json());
  EXPECT_EQ(j["k"], 2);
}

TEST(Optimizer, Guards) {
  EXPECT_THROW(minimize_zero(0, MixtureSpec::sk()), ConfigError);
  EXPECT_THROW(minimize_zero(7, MixtureSpec::sk()), ResourceError);
  EXPECT_THROW(minimize_zero(2, MixtureSpec::sk(), {}, StepOrderParam::constant(1.0)), ConfigError);
}
