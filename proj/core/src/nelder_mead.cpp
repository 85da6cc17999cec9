#include "parisi/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace parisi {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

bool better(const Vertex& a, const Vertex& b) {
  if (a.f != b.f) return a.f < b.f;
  return a.x < b.x;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  NelderMeadResult out;
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  if (n == 0) {
    out.x = x0;
    out.value = eval(x0);
    out.converged = true;
    return out;
  }

  // Adaptive coefficients (reflection, expansion, contraction, shrink).
  const double dim = static_cast<double>(n);
  const double rho = 1.0;
  const double chi = 1.0 + 2.0 / dim;
  const double psi = 0.75 - 1.0 / (2.0 * dim);
  const double sigma = 1.0 - 1.0 / dim;

  std::vector<Vertex> simplex;
  simplex.push_back({x0, eval(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    x[i] += options.initial_step;
    simplex.push_back({x, eval(x)});
  }

  std::vector<double> centroid(n);
  auto along = [&](double t) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (simplex.back().x[i] - centroid[i]);
    return x;
  };

  while (true) {
    std::sort(simplex.begin(), simplex.end(), better);
    double diameter = 0.0;
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t i = 0; i < n; ++i) {
        diameter = std::max(diameter, std::fabs(simplex[v].x[i] - simplex[0].x[i]));
      }
    }
    const double spread = simplex.back().f - simplex.front().f;
    if (diameter < options.tolerance ||
        (spread <= options.value_tolerance && diameter < options.loose_tolerance)) {
      out.converged = true;
      break;
    }
    if (out.evaluations >= options.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / dim;
    }

    Vertex reflected{along(-rho), 0.0};
    reflected.f = eval(reflected.x);
    if (better(reflected, simplex[0])) {
      Vertex expanded{along(-rho * chi), 0.0};
      expanded.f = eval(expanded.x);
      simplex.back() = better(expanded, reflected) ? expanded : reflected;
      continue;
    }
    if (better(reflected, simplex[n - 1])) {
      simplex.back() = reflected;
      continue;
    }
    const bool outside = better(reflected, simplex[n]);
    Vertex contracted{along(outside ? -rho * psi : psi), 0.0};
    contracted.f = eval(contracted.x);
    if (better(contracted, outside ? reflected : simplex[n])) {
      simplex.back() = contracted;
      continue;
    }
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t i = 0; i < n; ++i) {
        simplex[v].x[i] = simplex[0].x[i] + sigma * (simplex[v].x[i] - simplex[0].x[i]);
      }
      simplex[v].f = eval(simplex[v].x);
    }
  }
  out.x = simplex.front().x;
  out.value = simplex.front().f;
  return out;
}

}  // namespace parisi
