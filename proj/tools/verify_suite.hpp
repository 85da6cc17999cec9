#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parisi/tailblock.hpp"

namespace parisi::cli {

struct Check {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct NamedBlock {
  std::string name;
  TailBlockParams params;
};

/// The three tail blocks every identity is exercised on.
std::vector<NamedBlock> default_blocks();

/// Closed-form identities, derivative formulas and the t -> b limits.
std::vector<Check> identity_checks(std::uint64_t seed);

/// Gamma-spike probes at b - t = gap, compared against b - t = 1e-3.
std::vector<Check> singular_checks(double gap);

}  // namespace parisi::cli
