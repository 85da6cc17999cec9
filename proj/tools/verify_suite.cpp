#include "verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parisi/format.hpp"

namespace parisi::cli {

namespace {

Check upper(std::string name, double observed, double bound, std::string detail = {}) {
  return {std::move(name), observed < bound, observed, bound, std::move(detail)};
}

Check lower(std::string name, double observed, double bound, std::string detail = {}) {
  return {std::move(name), observed >= bound, observed, bound, std::move(detail)};
}

template <class F>
double grid_max(const TailBlockParams& p, int nt, int nx, double t_margin, double x_max, F f) {
  double worst = 0.0;
  for (int i = 0; i < nt; ++i) {
    const double t = p.a + t_margin + (p.b - p.a - 2.0 * t_margin) * i / (nt - 1);
    for (int j = 0; j < nx; ++j) {
      const double x = -x_max + 2.0 * x_max * j / (nx - 1);
      worst = std::max(worst, std::fabs(f(t, x)));
    }
  }
  return worst;
}

}  // namespace

std::vector<NamedBlock> default_blocks() {
  return {
      {"mid", {0.5, 1.0, 1.0, 8.0}},
      {"origin", {0.0, 1.0, 0.5, 6.0}},
      {"wide", {0.2, 1.5, 2.0, 16.0}},
  };
}

std::vector<Check> identity_checks(std::uint64_t seed) {
  std::vector<Check> out;
  for (const auto& [name, p] : default_blocks()) {
    const std::string tag = "[" + name + "]";

    out.push_back(upper("pde_residual" + tag,
                        grid_max(p, 20, 20, 0.01, 3.0,
                                 [&](double t, double x) { return pde_residual(p, t, x); }),
                        1e-9, "20x20 grid"));
    out.push_back(upper("pde_residual_fd" + tag,
                        grid_max(p, 5, 7, 0.1, 2.0,
                                 [&](double t, double x) { return pde_residual_fd(p, t, x); }),
                        1e-5, "step 1e-4"));

    const double h = 1e-4;
    out.push_back(upper("A_x_vs_difference" + tag,
                        grid_max(p, 5, 7, 0.1, 2.0,
                                 [&](double t, double x) {
                                   const double fd = (A(p, t, x + h) - A(p, t, x - h)) / (2 * h);
                                   return A_x(p, t, x) - fd;
                                 }),
                        1e-6));
    out.push_back(upper("A_xx_vs_difference" + tag,
                        grid_max(p, 5, 7, 0.1, 2.0,
                                 [&](double t, double x) {
                                   const double fd =
                                       (A(p, t, x + h) - 2 * A(p, t, x) + A(p, t, x - h)) / (h * h);
                                   return A_xx(p, t, x) - fd;
                                 }),
                        1e-4));

    const double ht = 1e-5;
    out.push_back(upper("B_t_vs_difference" + tag,
                        grid_max(p, 4, 5, 0.15 * (p.b - p.a), 1.0,
                                 [&](double t, double x) {
                                   const double fd = (B(p, t + ht, x) - B(p, t - ht, x)) / (2 * ht);
                                   return B_t_formula(p, t, x) - fd;
                                 }),
                        1e-5));
    out.push_back(upper("C_t_vs_difference" + tag,
                        grid_max(p, 4, 5, 0.15 * (p.b - p.a), 1.0,
                                 [&](double t, double x) {
                                   const double fd = (C(p, t + ht, x) - C(p, t - ht, x)) / (2 * ht);
                                   return C_t_formula(p, t, x) - fd;
                                 }),
                        1e-4));

    const double x = 0.3;
    const double t = p.b - 1e-4;
    const double delta = Delta(p, x);
    double previous = 1.0;
    bool shrinking = true;
    for (double gap : {1e-2, 1e-3, 1e-4}) {
      const double d = std::fabs(C(p, p.b - gap, x) - 1.0);
      shrinking = shrinking && d < previous;
      previous = d;
    }
    out.push_back({"C_gap_shrinks" + tag, shrinking, previous, 0.0, "b-t in {1e-2,1e-3,1e-4}"});
    out.push_back(upper("C_limit" + tag, std::fabs(C(p, t, x) - 1.0), 5e-3, "b-t=1e-4, x=0.3"));
    for (int k : {1, 2}) {
      out.push_back(upper("even_moment_k" + std::to_string(k) + tag,
                          std::fabs(even_moment(p, k, t, x) - 1.0), 5e-3, "b-t=1e-4, x=0.3"));
    }
    for (int k : {1, 3}) {
      const double target = delta / k;
      out.push_back(upper("mixed_limit_k" + std::to_string(k) + tag,
                          std::fabs(mixed_limit(p, k, t, x) / target - 1.0), 0.10,
                          "relative to Delta/k"));
    }
    out.push_back(lower("axx_sq_limit" + tag,
                        axx_sq_limit(p, t, x) / (4.0 * p.m_prime / 3.0 * delta), 0.95,
                        "ratio to (4m'/3) Delta"));
    out.push_back(lower("C_t_lower_bound" + tag,
                        C_t_formula(p, t, x) / (2.0 * (p.m + p.m_prime) / 3.0 * delta), 0.95,
                        "ratio to (2(m+m')/3) Delta"));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> um(0.0, 3.0), ua(0.3, 2.0), ux(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double m = um(rng), a = ua(rng), x = ux(rng);
    worst = std::max(worst, std::fabs(appendix_identity_residual(m, a, x)));
  }
  out.push_back(upper("appendix_identity", worst, 1e-8, "50 random (m, a, x), seed " + std::to_string(seed)));
  return out;
}

std::vector<Check> singular_checks(double gap) {
  std::vector<Check> out;
  for (const auto& [name, p] : default_blocks()) {
    const std::string tag = "[" + name + "]";
    const double near = axx_sq_limit(p, p.b - gap, 0.0);
    const double far = axx_sq_limit(p, p.b - 1e-3, 0.0);
    out.push_back({"axx_sq_grows" + tag, near > far, near, far,
                   "x=0, b-t=" + fmt17(gap) + " vs 1e-3"});
    const double g_near = Gamma(p, p.b - gap, 0.0);
    const double g_far = Gamma(p, p.b - 1e-3, 0.0);
    out.push_back({"Gamma_grows" + tag, g_near > g_far, g_near, g_far, "x=0"});
  }
  return out;
}

}  // namespace parisi::cli
