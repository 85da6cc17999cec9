#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parisi/mixture.hpp"

namespace parisi {

/// One Hamiltonian H_N(sigma) = sum_p c_p N^{-(p-1)/2} sum_{i_1..i_p} g_{i_1..i_p}
/// sigma_{i_1}...sigma_{i_p} + h sum_i sigma_i over all index tuples (repeats
/// included), so that E H(s1) H(s2) = N xi(R_12) exactly.
struct CouplingSample {
  struct Degree {
    int p = 0;
    std::vector<double> coeffs;  // row-major over (i_1, ..., i_p), already scaled
  };
  int n_spins = 0;
  double h = 0.0;
  std::uint64_t seed = 0;
  std::vector<Degree> degrees;

  bool quadratic_only() const;
};

inline constexpr int kMaxSpinsQuadratic = 24;
inline constexpr int kMaxSpinsGeneral = 18;

/// Standard normal keyed by (seed, p, index): a splitmix64 hash of the key
/// feeds Box-Muller, so any coefficient can be regenerated on its own.
double keyed_gaussian(std::uint64_t seed, int p, std::uint64_t index);

/// Throws ResourceError above the spin caps or when a tensor would exceed 1e8 entries.
CouplingSample sample_couplings(const MixtureSpec& spec, int n_spins, std::uint64_t seed);

/// Same shape with every coupling zero; only the field acts.
CouplingSample zero_couplings(const MixtureSpec& spec, int n_spins);

/// sigma must have n_spins entries, each +1 or -1 (DomainError otherwise).
double energy(const CouplingSample& sample, std::span<const int> sigma);

struct GroundState {
  std::vector<int> sigma;
  double value_per_spin = 0.0;  // max_sigma H(sigma) / N
};

/// Exact maximiser by enumeration: Gray-code local-field updates when only
/// p = 2 is present, direct evaluation otherwise. Ties go to the
/// lexicographically smallest sigma; the result does not depend on `jobs`.
GroundState exhaustive_max(const CouplingSample& sample, int jobs = 1);

/// Enumeration by direct evaluation of every configuration (reference path).
GroundState exhaustive_max_naive(const CouplingSample& sample);

struct TrendRow {
  int n_spins = 0;
  int samples = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  double seconds = 0.0;
};

/// Mean and standard error of max H / N over `samples` draws per N.
std::vector<TrendRow> gse_trend(const MixtureSpec& spec, const std::vector<int>& n_list,
                                int samples, std::uint64_t seed, int jobs = 1);

/// Columns N, samples, mean_max_over_N, stderr, seconds.
std::string trend_csv(const std::vector<TrendRow>& rows);

}  // namespace parisi
