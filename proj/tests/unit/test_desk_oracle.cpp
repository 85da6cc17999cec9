#include <cmath>

#include <gtest/gtest.h>

#include "parisi/desk_oracle.hpp"
#include "parisi/errors.hpp"

using namespace parisi;

TEST(DeskOracle, ZeroCouplingsWithField) {
  const CouplingSample s = zero_couplings(MixtureSpec::sk(1.0), 5);
  const std::vector<int> ones(5, 1);
  EXPECT_EQ(energy(s, ones), 5.0);
  const CouplingSample one = zero_couplings(MixtureSpec::sk(2.0), 1);
  const GroundState g = exhaustive_max(one);
  EXPECT_EQ(g.value_per_spin, 2.0);
  EXPECT_EQ(g.sigma, std::vector<int>{1});
}

TEST(DeskOracle, EnergyErrors) {
  const CouplingSample s = sample_couplings(MixtureSpec::sk(), 4, 1);
  EXPECT_THROW(energy(s, std::vector<int>{1, 1, 1}), DomainError);
  EXPECT_THROW(energy(s, std::vector<int>{1, 0, 1, 1}), DomainError);
}

TEST(DeskOracle, TwoSpinsByHand) {
  const CouplingSample s = sample_couplings(MixtureSpec::sk(), 2, 99);
  const auto& J = s.degrees.front().coeffs;
  double best = -1e300;
  for (int a : {-1, 1}) {
    for (int b : {-1, 1}) {
      const double e = J[0] + J[3] + (J[1] + J[2]) * a * b;
      best = std::max(best, e);
    }
  }
  EXPECT_NEAR(exhaustive_max(s).value_per_spin, best / 2.0, 1e-15);
}

TEST(DeskOracle, RegenerationIsBitExact) {
  const MixtureSpec spec({{2, 0.5}, {3, 0.2}}, 0.1);
  const CouplingSample a = sample_couplings(spec, 6, 1234);
  const CouplingSample b = sample_couplings(spec, 6, 1234);
  ASSERT_EQ(a.degrees.size(), 2u);
  for (std::size_t d = 0; d < 2; ++d) EXPECT_EQ(a.degrees[d].coeffs, b.degrees[d].coeffs);
  EXPECT_NE(a.degrees[0].coeffs, sample_couplings(spec, 6, 1235).degrees[0].coeffs);
  EXPECT_EQ(keyed_gaussian(7, 3, 11), keyed_gaussian(7, 3, 11));
}

TEST(DeskOracle, CouplingScaleAndMoments) {
  // Coefficients are c_p N^{-(p-1)/2} g with g standard normal.
  const int n = 24;
  const CouplingSample s = sample_couplings(MixtureSpec::sk(), n, 5);
  const auto& c = s.degrees.front().coeffs;
  double mean = 0.0, second = 0.0;
  for (double v : c) mean += v, second += v * v;
  mean /= c.size();
  second /= c.size();
  const double var = 0.5 / n;
  EXPECT_NEAR(mean, 0.0, 5.0 * std::sqrt(var / c.size()));
  EXPECT_NEAR(second / var, 1.0, 5.0 * std::sqrt(2.0 / c.size()));
}

TEST(DeskOracle, CovarianceByConstruction) {
  // E H(s1) H(s2) summed tuple by tuple equals N xi(R) for overlaps in [0, 1].
  const MixtureSpec spec({{2, 0.5}, {3, 0.3}}, 0.0);
  const int n = 5;
  const std::vector<int> s1{1, -1, 1, 1, -1}, s2{1, 1, -1, 1, -1};
  double cov = 0.0;
  for (const auto& [p, c2] : spec.terms()) {
    const double scale2 = c2 * std::pow(n, -(p - 1));
    const int tuples = static_cast<int>(std::pow(n, p));
    for (int t = 0; t < tuples; ++t) {
      int rest = t, prod = 1;
      for (int k = 0; k < p; ++k, rest /= n) prod *= s1[rest % n] * s2[rest % n];
      cov += scale2 * prod;
    }
  }
  double r = 0.0;
  for (int i = 0; i < n; ++i) r += s1[i] * s2[i];
  EXPECT_NEAR(cov, n * spec.xi(r / n), 1e-12);
}

TEST(DeskOracle, SymmetryForEvenMixtures) {
  const CouplingSample s = sample_couplings(MixtureSpec({{2, 0.5}, {4, 0.2}}, 0.3), 6, 3);
  const std::vector<int> sigma{1, -1, -1, 1, 1, 1};
  std::vector<int> flipped(sigma);
  for (int& v : flipped) v = -v;
  double field = 0.0;
  for (int v : sigma) field += v;
  EXPECT_NEAR(energy(s, flipped), energy(s, sigma) - 2 * 0.3 * field, 1e-12);
}

TEST(DeskOracle, GrayCodeMatchesNaive) {
  for (int n : {3, 7, 10, 12}) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const CouplingSample s = sample_couplings(MixtureSpec::sk(0.2), n, seed);
      const GroundState a = exhaustive_max(s);
      const GroundState b = exhaustive_max_naive(s);
      EXPECT_EQ(a.sigma, b.sigma);
      EXPECT_EQ(a.value_per_spin, b.value_per_spin);
    }
  }
}

TEST(DeskOracle, HigherDegreeAndJobs) {
  const CouplingSample s = sample_couplings(MixtureSpec({{2, 0.5}, {3, 0.5}}, 0.0), 9, 8);
  const GroundState a = exhaustive_max(s, 1);
  const GroundState b = exhaustive_max(s, 4);
  EXPECT_EQ(a.sigma, b.sigma);
  EXPECT_EQ(a.value_per_spin, b.value_per_spin);
}

TEST(DeskOracle, Caps) {
  EXPECT_THROW(sample_couplings(MixtureSpec::sk(), 25, 1), ResourceError);
  EXPECT_THROW(sample_couplings(MixtureSpec::pure(3), 19, 1), ResourceError);
  EXPECT_THROW(sample_couplings(MixtureSpec::pure(8), 12, 1), ResourceError);
}

TEST(DeskOracle, TrendDeterministicAndStandardError) {
  const auto a = gse_trend(MixtureSpec::sk(), {6, 10}, 40, 7);
  const auto b = gse_trend(MixtureSpec::sk(), {6, 10}, 40, 7, 3);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a[i].mean, b[i].mean);
    EXPECT_EQ(a[i].stderr_mean, b[i].stderr_mean);
  }
  // Sixteen times the samples cuts the standard error about fourfold.
  const auto big = gse_trend(MixtureSpec::sk(), {10}, 640, 7);
  const auto small = gse_trend(MixtureSpec::sk(), {10}, 40, 7);
  EXPECT_NEAR(small[0].stderr_mean / big[0].stderr_mean, 4.0, 1.6);
  EXPECT_EQ(trend_csv(a).substr(0, trend_csv(a).find('\n')),
            "N,samples,mean_max_over_N,stderr,seconds");
  EXPECT_THROW(gse_trend(MixtureSpec::sk(), {6}, 1, 7), ConfigError);
}
