#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "parisi/chain.hpp"
#include "parisi/errors.hpp"
#include "parisi/special.hpp"
#include "parisi/tailblock.hpp"

using namespace parisi;

namespace {

const StepOrderParam kThreeLevel{{0.0, 0.35, 0.7}, {0.6, 1.4, 3.0}};

}  // namespace

TEST(Chain, ZeroParameter) {
  EXPECT_NEAR(psi_zero(StepOrderParam::zero(), MixtureSpec::sk()).psi,
              std::sqrt(2.0 / std::numbers::pi), 1e-12);
  const double far = psi_zero(StepOrderParam::zero(), MixtureSpec::sk(10.0)).psi;
  EXPECT_NEAR(far, 10.0, 1e-6);
  EXPECT_NEAR(far, special::folded_mean(10.0, 1.0), 1e-12);
}

TEST(Chain, OneLevelMatchesA) {
  for (double h : {0.0, 0.3, -1.1}) {
    const MixtureSpec spec = MixtureSpec::sk(h);
    for (double m : {0.2, 1.0, 4.0}) {
      const TailBlockParams p{0.0, spec.xi_prime(1.0), 0.0, m};
      EXPECT_NEAR(psi_zero(StepOrderParam::constant(m), spec).psi, A(p, 0.0, h), 1e-8);
    }
  }
}

TEST(Chain, TwoLevelMatchesB) {
  const MixtureSpec spec({{2, 0.5}, {3, 0.3}}, 0.2);
  for (double q : {0.3, 0.8}) {
    const StepOrderParam g{{0.0, q}, {0.7, 2.5}};
    const TailBlockParams p{0.0, spec.xi_prime(1.0), 0.7, 2.5};
    const double b = B(p, spec.xi_prime(q), spec.h());
    EXPECT_NEAR(psi_zero(g, spec).psi, b, 1e-8);
    const PerturbedParam pp = perturb(StepOrderParam::constant(0.7), q, 2.5);
    EXPECT_NEAR(psi_zero_perturbed(pp, spec).psi, b, 1e-8);
  }
}

TEST(Chain, PerturbedMatchesMaterialised) {
  const MixtureSpec spec = MixtureSpec::sk(0.3);
  for (double q : {0.75, 0.9, 0.99}) {
    const PerturbedParam p = perturb(kThreeLevel, q, 7.0);
    EXPECT_NEAR(psi_zero_perturbed(p, spec).psi, psi_zero(p.materialize(), spec).psi, 1e-9);
  }
}

TEST(Chain, PerturbationLimits) {
  const MixtureSpec spec = MixtureSpec::sk();
  const StepOrderParam base{{0.0, 0.5}, {0.8, 2.0}};
  const double psi = psi_zero(base, spec).psi;
  EXPECT_NEAR(psi_zero_perturbed(perturb(base, 1.0 - 1e-6, 8.0), spec).psi, psi, 1e-4);
  EXPECT_NEAR(psi_zero_perturbed(perturb(base, 0.7, 2.0 + 1e-9), spec).psi, psi, 1e-7);
}

TEST(Chain, Diagnostics) {
  const MixtureSpec spec({{2, 0.5}, {4, 0.2}}, 0.1);
  const ChainEvaluation e = psi_zero(kThreeLevel, spec);
  double total = 0.0;
  for (double v : e.level_variances) total += v;
  EXPECT_NEAR(total, spec.xi_prime(1.0) - spec.xi_prime(0.0), 1e-12);
  for (double d : e.weight_defects) EXPECT_LT(d, 1e-8);
}

TEST(Chain, QuadratureTerminalAgrees) {
  ChainOptions quad;
  quad.terminal = TerminalMode::kQuadrature;
  const MixtureSpec spec = MixtureSpec::sk(0.2);
  EXPECT_NEAR(psi_zero(kThreeLevel, spec, quad).psi, psi_zero(kThreeLevel, spec).psi, 1e-10);
  EXPECT_NEAR(psi_zero(StepOrderParam::zero(), spec, quad).psi,
              psi_zero(StepOrderParam::zero(), spec).psi, 1e-10);
}

TEST(Chain, ThreadCountDoesNotChangeResult) {
  ChainOptions threaded;
  threaded.jobs = 3;
  const MixtureSpec spec = MixtureSpec::sk(0.4);
  EXPECT_EQ(psi_zero(kThreeLevel, spec, threaded).psi, psi_zero(kThreeLevel, spec).psi);
}

TEST(Chain, LevelGuard) {
  ChainOptions small;
  small.max_levels = 2;
  EXPECT_THROW(psi_zero(kThreeLevel, MixtureSpec::sk(), small), ResourceError);
  EXPECT_THROW(psi_zero(StepOrderParam{{0.0, 0.5}, {1.0, 0.5}}, MixtureSpec::sk()), DomainError);
}

TEST(Chain, FiniteTemperature) {
  // alpha == 1: (1/beta) log E cosh(beta z) = beta / 2 at xi'(1) = 1.
  EXPECT_NEAR(psi_finite(FiniteTempStepParam::one(), 1.0, MixtureSpec::sk()).psi, 0.5, 1e-8);
  EXPECT_NEAR(psi_finite(FiniteTempStepParam::one(), 3.0, MixtureSpec::sk()).psi, 1.5, 1e-8);

  const FiniteTempStepParam alpha{{0.0, 0.4, 0.8}, {0.1, 0.5, 1.0}};
  EXPECT_NEAR(psi_finite(alpha, 2.0, MixtureSpec::sk(0.3)).psi,
              psi_finite(alpha, 2.0, MixtureSpec::sk(-0.3)).psi, 1e-13);
  EXPECT_THROW(psi_finite(alpha, 0.0, MixtureSpec::sk()), DomainError);
}

TEST(Chain, FiniteApproachesZeroTemperature) {
  // beta alpha = gamma below q = 1: psi_finite + log 2 / beta -> psi_zero.
  const MixtureSpec spec = MixtureSpec::sk(0.2);
  const StepOrderParam g{{0.0, 0.6}, {0.8, 2.0}};
  const double beta = 64.0;
  const FiniteTempStepParam alpha{{0.0, 0.6, 1.0}, {0.8 / beta, 2.0 / beta, 1.0}};
  const double finite = psi_finite(alpha, beta, spec).psi + std::log(2.0) / beta;
  EXPECT_NEAR(finite, psi_zero(g, spec).psi, 2e-2);
}
