#include "parisi/chain.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "parisi/errors.hpp"
#include "parisi/special.hpp"
#include "parisi/tailblock.hpp"

namespace parisi {

namespace {

struct DepthScratch {
  QuadratureRule rule;
  std::vector<double> values;
  std::vector<double> aux;
};

struct Context {
  const std::vector<ChainLevel>* levels;
  const LeafFn* leaf;
  const ChainOptions* options;
  QuadratureRule gh;
  std::vector<DepthScratch> scratch;
  std::vector<double> defects;
  std::size_t leaves = 0;
};

const QuadratureRule& choose_rule(Context& ctx, std::size_t depth, double x) {
  const ChainLevel& lv = (*ctx.levels)[depth];
  const ChainOptions& opt = *ctx.options;
  if (lv.child_width > 0.0 && lv.child_width >= opt.gh_width_ratio * lv.sigma) return ctx.gh;
  const double width = lv.child_width > 0.0 ? lv.child_width / lv.sigma : 1.0;
  QuadratureRule& rule = ctx.scratch[depth].rule;
  build_kink_rule(-x / lv.sigma, width, lv.exponent * lv.sigma, opt.layout, rule);
  return rule;
}

LeafValue reduce(Context& ctx, std::size_t depth, double exponent, const QuadratureRule& rule,
                 const std::vector<double>& values, const std::vector<double>& aux) {
  LeafValue out;
  out.value = log_moment(exponent, values, rule.weights);
  double mass = 0.0;
  double tilted = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double w = rule.weights[j] * std::exp(exponent * (values[j] - out.value));
    mass += w;
    tilted += w * aux[j];
  }
  out.aux = tilted;
  ctx.defects[depth] = std::max(ctx.defects[depth], std::fabs(mass - 1.0));
  return out;
}

LeafValue descend(Context& ctx, std::size_t depth, double x) {
  if (depth == ctx.levels->size()) {
    ++ctx.leaves;
    return (*ctx.leaf)(x);
  }
  const ChainLevel& lv = (*ctx.levels)[depth];
  if (lv.sigma == 0.0) return descend(ctx, depth + 1, x);
  const QuadratureRule& rule = choose_rule(ctx, depth, x);
  DepthScratch& s = ctx.scratch[depth];
  s.values.resize(rule.size());
  s.aux.resize(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const LeafValue child = descend(ctx, depth + 1, x + lv.sigma * rule.nodes[j]);
    s.values[j] = child.value;
    s.aux[j] = child.aux;
  }
  return reduce(ctx, depth, lv.exponent, rule, s.values, s.aux);
}

Context make_context(const std::vector<ChainLevel>& levels, const LeafFn& leaf,
                     const ChainOptions& options) {
  Context ctx{&levels, &leaf, &options, cached_rule(options.order).as_rule(), {}, {}, 0};
  ctx.scratch.resize(levels.size());
  ctx.defects.assign(levels.size(), 0.0);
  return ctx;
}

void check_guard(std::size_t levels, const ChainOptions& options) {
  if (levels > options.max_levels) {
    throw ResourceError("chain: " + std::to_string(levels) + " levels exceed the guard of " +
                        std::to_string(options.max_levels));
  }
}

double width_of(double variance, double exponent) {
  double w = std::sqrt(std::max(variance, 0.0));
  if (exponent > 0.0) w = std::min(w, 1.0 / exponent);
  return w;
}

// Quadrature levels 0..n-1 of a zero-temperature chain. Shared by the plain
// and perturbed chains so both integrate the outer levels identically.
std::vector<ChainLevel> zero_levels(const StepOrderParam& g, const MixtureSpec& spec,
                                    std::vector<double>& variances) {
  const std::size_t n = g.top();
  const double top = spec.xi_prime(1.0);
  variances.clear();
  for (std::size_t i = 0; i <= n; ++i) {
    const double next = i < n ? spec.xi_prime(g.qs[i + 1]) : top;
    variances.push_back(next - spec.xi_prime(g.qs[i]));
  }
  std::vector<ChainLevel> levels;
  for (std::size_t i = 0; i < n; ++i) {
    levels.push_back({std::sqrt(variances[i]), g.ms[i],
                      width_of(top - spec.xi_prime(g.qs[i + 1]), g.ms[i + 1])});
  }
  return levels;
}

}  // namespace

ChainEvaluation run_chain(const std::vector<ChainLevel>& levels, double h, const LeafFn& leaf,
                          const ChainOptions& options) {
  ChainEvaluation out;
  if (levels.empty() || levels.front().sigma == 0.0 || options.jobs <= 1) {
    Context ctx = make_context(levels, leaf, options);
    const LeafValue v = descend(ctx, 0, h);
    out.psi = v.value;
    out.aux = v.aux;
    out.weight_defects = ctx.defects;
    out.leaf_evaluations = ctx.leaves;
    return out;
  }

  // Split the outermost level across workers, then reduce in node order.
  Context root = make_context(levels, leaf, options);
  const QuadratureRule rule = choose_rule(root, 0, h);
  const std::size_t count = rule.size();
  std::vector<double> values(count);
  std::vector<double> aux(count);
  const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(options.jobs), count);
  std::vector<Context> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) workers.push_back(make_context(levels, leaf, options));
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < jobs; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t j = w; j < count; j += jobs) {
          const LeafValue child = descend(workers[w], 1, h + levels[0].sigma * rule.nodes[j]);
          values[j] = child.value;
          aux[j] = child.aux;
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& w : workers) {
    for (std::size_t d = 1; d < levels.size(); ++d) {
      root.defects[d] = std::max(root.defects[d], w.defects[d]);
    }
    root.leaves += w.leaves;
  }
  const LeafValue v = reduce(root, 0, levels[0].exponent, rule, values, aux);
  out.psi = v.value;
  out.aux = v.aux;
  out.weight_defects = root.defects;
  out.leaf_evaluations = root.leaves;
  return out;
}

ChainEvaluation psi_zero(const StepOrderParam& gamma, const MixtureSpec& spec,
                         const ChainOptions& options) {
  require_valid(gamma);
  check_guard(gamma.levels(), options);
  std::vector<double> variances;
  std::vector<ChainLevel> levels = zero_levels(gamma, spec, variances);
  const double m = gamma.ms.back();
  const double s = std::sqrt(variances.back());
  LeafFn leaf;
  if (options.terminal == TerminalMode::kAnalytic) {
    leaf = [m, s](double x) { return LeafValue{special::folded_log_mgf(m, x, s), 0.0}; };
  } else {
    levels.push_back({s, m, 0.0});
    leaf = [](double x) { return LeafValue{std::fabs(x), 0.0}; };
  }
  ChainEvaluation out = run_chain(levels, spec.h(), leaf, options);
  out.level_variances = std::move(variances);
  return out;
}

ChainEvaluation psi_zero_perturbed(const PerturbedParam& p, const MixtureSpec& spec,
                                   const ChainOptions& options) {
  const PerturbedParam checked = perturb(p.base, p.q, p.m_next);
  check_guard(checked.base.levels() + 1, options);
  std::vector<double> variances;
  const std::vector<ChainLevel> levels = zero_levels(checked.base, spec, variances);
  const TailBlockParams block{spec.xi_prime(checked.base.qs.back()), spec.xi_prime(1.0),
                              checked.base.ms.back(), checked.m_next};
  const double t = spec.xi_prime(checked.q);
  const PanelLayout layout = options.layout;
  const LeafFn leaf = [block, t, layout](double x) {
    const TailMoments tm = tail_moments(block, t, x, layout);
    return LeafValue{tm.B, tm.C};
  };
  ChainEvaluation out = run_chain(levels, spec.h(), leaf, options);
  variances.back() = t - block.a;
  variances.push_back(block.b - t);
  out.level_variances = std::move(variances);
  return out;
}

ChainEvaluation psi_finite(const FiniteTempStepParam& alpha, double beta, const MixtureSpec& spec,
                           const ChainOptions& options) {
  require_valid(alpha);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("psi_finite: beta must be > 0");
  check_guard(alpha.levels(), options);
  const std::size_t n = alpha.levels() - 1;
  std::vector<double> variances;
  for (std::size_t i = 0; i <= n; ++i) {
    const double next = i < n ? spec.xi_prime(alpha.qs[i + 1]) : spec.xi_prime(1.0);
    variances.push_back(next - spec.xi_prime(alpha.qs[i]));
  }
  const double qn = spec.xi_prime(alpha.qs[n]);
  const double smooth = 1.0 / (beta * beta);
  std::vector<ChainLevel> levels;
  for (std::size_t i = 0; i < n; ++i) {
    const double below = qn - spec.xi_prime(alpha.qs[i + 1]) + smooth;
    levels.push_back(
        {std::sqrt(variances[i]), beta * alpha.zetas[i], width_of(below, beta * alpha.zetas[i + 1])});
  }
  // The top plateau has exponent beta, for which the Gaussian step is exact:
  // (1/beta) log E cosh(beta (x + s z)) = log cosh(beta x) / beta + beta s^2 / 2.
  const double shift = 0.5 * beta * variances.back();
  const LeafFn leaf = [beta, shift](double x) {
    return LeafValue{special::log_cosh(beta * x) / beta + shift, 0.0};
  };
  ChainEvaluation out = run_chain(levels, spec.h(), leaf, options);
  out.level_variances = std::move(variances);
  return out;
}

}  // namespace parisi
