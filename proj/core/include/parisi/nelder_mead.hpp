#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace parisi {

struct NelderMeadOptions {
  /// Edge length of the initial simplex, per coordinate.
  double initial_step = 0.5;
  /// Converged once every vertex lies within this distance (max norm) of the best one.
  double tolerance = 1e-7;
  /// ... or once the value spread falls below this and the simplex is below `loose_tolerance`.
  double value_tolerance = 1e-14;
  double loose_tolerance = 1e-4;
  std::size_t max_evaluations = 2000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Derivative-free simplex descent with dimension-adaptive coefficients.
/// Deterministic: ties between equal values go to the lexicographically
/// smaller vertex.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace parisi
