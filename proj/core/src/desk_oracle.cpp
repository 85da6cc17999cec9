#include "parisi/desk_oracle.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "parisi/errors.hpp"
#include "parisi/format.hpp"

namespace parisi {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

double unit_open(std::uint64_t bits) {
  // 53 random bits mapped into (0, 1).
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

constexpr std::size_t kMaxTensorEntries = 100'000'000;
// Enumeration is cut into this many blocks regardless of thread count.
constexpr std::uint64_t kBlocks = 64;

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) { return a < b; }

std::vector<int> spins_of(std::uint64_t code, int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[i] = (code >> i) & 1U ? -1 : 1;
  return s;
}

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<int> sigma;

  void offer(double v, const std::vector<int>& s) {
    if (v > value || (v == value && lex_less(s, sigma))) {
      value = v;
      sigma = s;
    }
  }
};

double contract(const CouplingSample::Degree& d, int n, std::span<const int> sigma) {
  // Successive contraction over the last index: O(N^p).
  std::vector<double> cur = d.coeffs;
  std::size_t len = cur.size();
  for (int level = 0; level < d.p; ++level) {
    const std::size_t rows = len / static_cast<std::size_t>(n);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      const double* row = cur.data() + r * n;
      for (int i = 0; i < n; ++i) acc += row[i] * sigma[i];
      cur[r] = acc;
    }
    len = rows;
  }
  return cur[0];
}

Best enumerate_block_naive(const CouplingSample& s, std::uint64_t begin, std::uint64_t end) {
  Best best;
  for (std::uint64_t c = begin; c < end; ++c) {
    const std::vector<int> sigma = spins_of(c, s.n_spins);
    best.offer(energy(s, sigma), sigma);
  }
  return best;
}

Best enumerate_block_gray(const CouplingSample& s, std::uint64_t begin, std::uint64_t end) {
  const int n = s.n_spins;
  const std::vector<double>& J = s.degrees.front().coeffs;
  // Symmetric off-diagonal couplings K_ij = J_ij + J_ji; the diagonal only shifts H.
  std::vector<double> K(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) K[i * n + j] = J[i * n + j] + J[j * n + i];
    }
  }
  Best best;
  std::uint64_t code = begin ^ (begin >> 1);
  std::vector<int> sigma = spins_of(code, n);
  double h_val = energy(s, sigma);
  std::vector<double> field(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) field[i] += K[i * n + j] * sigma[j];
  }
  // Rank by an exact re-evaluation whenever the running energy comes within
  // rounding distance of the best seen so far.
  double top = -std::numeric_limits<double>::infinity();
  auto consider = [&](double v) {
    if (v >= top - 1e-9) {
      top = std::max(top, v);
      best.offer(energy(s, sigma), sigma);
    }
  };
  consider(h_val);
  for (std::uint64_t c = begin + 1; c < end; ++c) {
    const std::uint64_t next = c ^ (c >> 1);
    const int k = std::countr_zero(next ^ code);
    const int old = sigma[k];
    h_val += -2.0 * old * (field[k] + s.h);
    sigma[k] = -old;
    for (int i = 0; i < n; ++i) field[i] -= 2.0 * old * K[i * n + k];
    code = next;
    consider(h_val);
  }
  return best;
}

}  // namespace

bool CouplingSample::quadratic_only() const {
  return degrees.size() == 1 && degrees.front().p == 2;
}

double keyed_gaussian(std::uint64_t seed, int p, std::uint64_t index) {
  const std::uint64_t key = mix_key(seed, static_cast<std::uint64_t>(p), index);
  const double u1 = unit_open(splitmix64(key));
  const double u2 = unit_open(splitmix64(key ^ 0xd1b54a32d192ed03ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

CouplingSample shape(const MixtureSpec& spec, int n_spins) {
  const bool quadratic = spec.terms().size() == 1 && spec.terms().front().first == 2;
  const int cap = quadratic ? kMaxSpinsQuadratic : kMaxSpinsGeneral;
  if (n_spins < 1 || n_spins > cap) {
    throw ResourceError("desk oracle: N=" + std::to_string(n_spins) + " outside [1, " +
                        std::to_string(cap) + "]");
  }
  CouplingSample s;
  s.n_spins = n_spins;
  s.h = spec.h();
  for (const auto& [p, c2] : spec.terms()) {
    const double entries = std::pow(static_cast<double>(n_spins), p);
    if (entries > static_cast<double>(kMaxTensorEntries)) {
      throw ResourceError("desk oracle: degree " + std::to_string(p) + " tensor too large");
    }
    s.degrees.push_back({p, std::vector<double>(static_cast<std::size_t>(entries), 0.0)});
  }
  return s;
}

}  // namespace

CouplingSample sample_couplings(const MixtureSpec& spec, int n_spins, std::uint64_t seed) {
  CouplingSample s = shape(spec, n_spins);
  s.seed = seed;
  for (std::size_t d = 0; d < s.degrees.size(); ++d) {
    auto& deg = s.degrees[d];
    const double c2 = spec.terms()[d].second;
    const double scale = std::sqrt(c2) * std::pow(static_cast<double>(n_spins), -(deg.p - 1) / 2.0);
    for (std::size_t i = 0; i < deg.coeffs.size(); ++i) {
      deg.coeffs[i] = scale * keyed_gaussian(seed, deg.p, i);
    }
  }
  return s;
}

CouplingSample zero_couplings(const MixtureSpec& spec, int n_spins) { return shape(spec, n_spins); }

double energy(const CouplingSample& sample, std::span<const int> sigma) {
  if (sigma.size() != static_cast<std::size_t>(sample.n_spins)) {
    throw DomainError("energy: sigma has the wrong length");
  }
  double field = 0.0;
  for (int v : sigma) {
    if (v != 1 && v != -1) throw DomainError("energy: spins must be +1 or -1");
    field += v;
  }
  double total = sample.h * field;
  for (const auto& d : sample.degrees) total += contract(d, sample.n_spins, sigma);
  return total;
}

namespace {

GroundState enumerate(const CouplingSample& sample, int jobs, bool gray) {
  const std::uint64_t total = 1ULL << sample.n_spins;
  const std::uint64_t blocks = std::min<std::uint64_t>(kBlocks, total);
  std::vector<Best> found(blocks);
  parallel_for(blocks, jobs, [&](std::size_t b) {
    const std::uint64_t begin = total * b / blocks;
    const std::uint64_t end = total * (b + 1) / blocks;
    found[b] = gray ? enumerate_block_gray(sample, begin, end)
                    : enumerate_block_naive(sample, begin, end);
  });
  Best best;
  for (const auto& f : found) best.offer(f.value, f.sigma);
  return {best.sigma, best.value / sample.n_spins};
}

}  // namespace

GroundState exhaustive_max(const CouplingSample& sample, int jobs) {
  return enumerate(sample, jobs, sample.quadratic_only());
}

GroundState exhaustive_max_naive(const CouplingSample& sample) {
  return enumerate(sample, 1, false);
}

std::vector<TrendRow> gse_trend(const MixtureSpec& spec, const std::vector<int>& n_list,
                                int samples, std::uint64_t seed, int jobs) {
  if (samples < 2) throw ConfigError("gse_trend: need at least 2 samples per N");
  std::vector<TrendRow> rows;
  for (int n : n_list) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> values(static_cast<std::size_t>(samples));
    parallel_for(values.size(), jobs, [&](std::size_t s) {
      const std::uint64_t key = mix_key(seed, static_cast<std::uint64_t>(n), s);
      values[s] = exhaustive_max(sample_couplings(spec, n, key)).value_per_spin;
    });
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= samples;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= samples - 1;
    TrendRow row;
    row.n_spins = n;
    row.samples = samples;
    row.mean = mean;
    row.stderr_mean = std::sqrt(var / samples);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

std::string trend_csv(const std::vector<TrendRow>& rows) {
  std::ostringstream out;
  out << "N,samples,mean_max_over_N,stderr,seconds\n";
  for (const auto& r : rows) {
    out << r.n_spins << ',' << r.samples << ',' << fmt17(r.mean) << ',' << fmt17(r.stderr_mean)
        << ',' << fmt17(r.seconds) << '\n';
  }
  return out.str();
}

}  // namespace parisi
