#include <gtest/gtest.h>

#include "parisi/errors.hpp"
#include "parisi/order_param.hpp"

using namespace parisi;

TEST(OrderParam, Validation) {
  EXPECT_TRUE(validate(StepOrderParam::zero()).empty());
  EXPECT_FALSE(validate(StepOrderParam{{0.0, 0.5}, {1.0, 0.5}}).empty());
  EXPECT_FALSE(validate(StepOrderParam{{0.0, 1.0}, {0.0, 1.0}}).empty());
  EXPECT_FALSE(validate(StepOrderParam{{0.1}, {1.0}}).empty());
  EXPECT_FALSE(validate(StepOrderParam{{0.0, 0.5}, {1.0}}).empty());
  EXPECT_FALSE(validate(StepOrderParam{{0.0, 0.5, 0.5 + 1e-13}, {1.0, 2.0, 3.0}}).empty());
  EXPECT_THROW(require_valid(StepOrderParam{{0.0, 0.5}, {1.0, 0.5}}), DomainError);

  EXPECT_TRUE(validate(FiniteTempStepParam::one()).empty());
  EXPECT_TRUE(validate(FiniteTempStepParam{{0.0, 1.0}, {0.2, 1.0}}).empty());
  EXPECT_FALSE(validate(FiniteTempStepParam{{0.0, 0.5}, {0.2, 0.9}}).empty());
}

TEST(OrderParam, ValueAt) {
  const StepOrderParam g{{0.0, 0.4, 0.7}, {0.5, 1.0, 3.0}};
  EXPECT_EQ(g.value_at(0.0), 0.5);
  EXPECT_EQ(g.value_at(0.39), 0.5);
  EXPECT_EQ(g.value_at(0.4), 1.0);
  EXPECT_EQ(g.value_at(0.99), 3.0);
}

TEST(OrderParam, Perturb) {
  const PerturbedParam p = perturb(StepOrderParam::constant(0.5), 0.9, 3.0);
  const StepOrderParam steps = p.materialize();
  EXPECT_EQ(steps, (StepOrderParam{{0.0, 0.9}, {0.5, 3.0}}));
  EXPECT_NEAR(l1_distance(p.base, steps), 0.1 * 2.5, 1e-15);
  EXPECT_THROW(perturb(StepOrderParam::constant(0.5), 0.0, 3.0), DomainError);
  EXPECT_THROW(perturb(StepOrderParam::constant(0.5), 1.0, 3.0), DomainError);
  EXPECT_THROW(perturb(StepOrderParam::constant(0.5), 0.5, 0.5), DomainError);
}

TEST(OrderParam, L1Distance) {
  const StepOrderParam a{{0.0, 0.3}, {1.0, 2.0}};
  EXPECT_EQ(l1_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(l1_distance(StepOrderParam::zero(), StepOrderParam::constant(2.5)), 2.5);
  const StepOrderParam b{{0.0, 0.6}, {0.5, 2.0}};
  // |1-0.5| on [0,0.3), |2-0.5| on [0.3,0.6), 0 after.
  EXPECT_NEAR(l1_distance(a, b), 0.3 * 0.5 + 0.3 * 1.5, 1e-15);
  EXPECT_NEAR(l1_distance(a, b, 0.45), 0.3 * 0.5 + 0.15 * 1.5, 1e-15);
  EXPECT_EQ(l1_distance(a, b), l1_distance(b, a));
}

TEST(OrderParam, Rescale) {
  const FiniteTempStepParam alpha{{0.0, 0.5, 0.9}, {0.1, 0.4, 1.0}};
  const StepOrderParam g = rescale(alpha, 10.0);
  EXPECT_DOUBLE_EQ(g.value_at(0.2), 1.0);
  EXPECT_DOUBLE_EQ(g.value_at(0.6), 4.0);
  EXPECT_DOUBLE_EQ(g.value_at(0.95), 10.0);
}

TEST(OrderParam, TextRoundTrip) {
  const StepOrderParam g{{0.0, 0.1 + 0.2, 2.0 / 3.0}, {1.0 / 3.0, 0.7, 123456.789}};
  EXPECT_EQ(parse_step_param(to_string(g)), g);
  const FiniteTempStepParam a{{0.0, 0.25}, {1.0 / 7.0, 1.0}};
  EXPECT_EQ(parse_finite_param(to_string(a)), a);
  EXPECT_EQ(parse_step_param("[[0, 0.5], [0.4, 2]]"), (StepOrderParam{{0.0, 0.4}, {0.5, 2.0}}));
  EXPECT_THROW(parse_step_param("0:x"), ConfigError);
  EXPECT_THROW(parse_step_param("0"), ConfigError);
  EXPECT_THROW(parse_step_param(""), ConfigError);
  EXPECT_THROW(parse_step_param("[[0]]"), ConfigError);
}
