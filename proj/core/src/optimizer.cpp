#include "parisi/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "parisi/errors.hpp"
#include "parisi/format.hpp"
#include "parisi/nelder_mead.hpp"

namespace parisi {

namespace {

constexpr double kTieWindow = 1e-9;
constexpr double kFloorExponent = 1e-10;

void append_q_coords(const std::vector<double>& qs, std::vector<double>& out) {
  // Inverse of q_j = S_j / (1 + S_{k-1}).
  const std::size_t k = qs.size();
  if (k < 2) return;
  const double scale = 1.0 / (1.0 - qs.back());
  double prev = 0.0;
  for (std::size_t j = 1; j < k; ++j) {
    const double s = qs[j] * scale;
    out.push_back(std::log(std::max(s - prev, std::numeric_limits<double>::min())));
    prev = s;
  }
}

std::vector<double> q_from_coords(int k, const std::vector<double>& c, std::size_t offset) {
  std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
  for (int j = 1; j < k; ++j) sums[j] = sums[j - 1] + std::exp(c[offset + j - 1]);
  std::vector<double> qs(static_cast<std::size_t>(k), 0.0);
  for (int j = 1; j < k; ++j) qs[j] = sums[j] / (1.0 + sums[k - 1]);
  // Extreme coordinates can round atoms together or onto q = 1; pull them apart.
  const double gap = 2.0 * kAtomMergeTolerance;
  for (int j = 1; j < k; ++j) qs[j] = std::max(qs[j], qs[j - 1] + gap);
  if (k > 1) qs[k - 1] = std::min(qs[k - 1], 1.0 - gap);
  for (int j = k - 2; j >= 1; --j) qs[j] = std::min(qs[j], qs[j + 1] - gap);
  return qs;
}

std::vector<double> flatten(const StepOrderParam& g) {
  std::vector<double> v = g.qs;
  v.insert(v.end(), g.ms.begin(), g.ms.end());
  return v;
}

std::vector<double> flatten(const FiniteTempStepParam& a) {
  std::vector<double> v = a.qs;
  v.insert(v.end(), a.zetas.begin(), a.zetas.end());
  return v;
}

struct Candidate {
  std::vector<double> coords;
  std::vector<double> key;  // flattened parameter, for tie-breaking
  double value = std::numeric_limits<double>::infinity();
};

bool preferred(const Candidate& a, const Candidate& b) {
  if (std::fabs(a.value - b.value) <= kTieWindow) return a.key < b.key;
  return a.value < b.value;
}

// Descent, randomised restarts around the best point, then a short polish.
template <class Param, class Map, class Eval>
OptimResult run_minimisation(int k, double beta, std::vector<double> start, Map map, Eval eval,
                             const OptimOptions& options) {
  auto objective = [&](const std::vector<double>& c) {
    try {
      return eval(map(c));
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    } catch (const EvaluationError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const std::size_t runs = static_cast<std::size_t>(std::max(options.restarts, 0)) + 2;
  NelderMeadOptions nm;
  nm.tolerance = options.tolerance;
  nm.max_evaluations = std::max<std::size_t>(options.budget / runs, 1);

  std::size_t evaluations = 0;
  bool converged = true;
  auto descend = [&](const std::vector<double>& x0, double step, std::size_t& used, bool& ok) {
    NelderMeadOptions o = nm;
    o.initial_step = step;
    const NelderMeadResult r = nelder_mead(objective, x0, o);
    used = r.evaluations;
    ok = r.converged;
    return Candidate{r.x, flatten(map(r.x)), r.value};
  };

  std::size_t used = 0;
  bool ok = true;
  Candidate best = descend(start, 0.5, used, ok);
  evaluations += used;
  converged = converged && ok;

  const std::size_t extra = runs - 2;
  if (extra > 0 && !start.empty()) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<std::vector<double>> starts(extra, best.coords);
    for (auto& s : starts) {
      for (double& v : s) v += noise(rng);
    }
    std::vector<Candidate> found(extra);
    std::vector<std::size_t> counts(extra, 0);
    parallel_for(extra, options.jobs, [&](std::size_t r) {
      bool good = true;
      found[r] = descend(starts[r], 0.25, counts[r], good);
    });
    for (std::size_t r = 0; r < extra; ++r) {
      evaluations += counts[r];
      if (preferred(found[r], best)) best = found[r];
    }
  }

  if (!start.empty()) {
    Candidate polished = descend(best.coords, 0.05, used, ok);
    evaluations += used;
    if (preferred(polished, best)) best = polished;
    converged = converged && ok;
  }

  OptimResult out;
  out.k = k;
  out.beta = beta;
  out.param = map(best.coords);
  out.value = best.value;
  out.evaluations = evaluations;
  out.converged = converged;
  out.tolerance = options.tolerance;
  if (!std::isfinite(out.value)) {
    throw EvaluationError("optimizer: no finite objective value found", out.value);
  }
  return out;
}

StepOrderParam default_zero_start(int k) {
  StepOrderParam g;
  for (int i = 0; i < k; ++i) {
    g.qs.push_back(static_cast<double>(i) / k);
    g.ms.push_back(1.0 + 2.0 * i);
  }
  return g;
}

FiniteTempStepParam default_finite_start(int k) {
  FiniteTempStepParam a;
  for (int i = 0; i < k; ++i) {
    a.qs.push_back(static_cast<double>(i) / k);
    a.zetas.push_back(static_cast<double>(i + 1) / k);
  }
  return a;
}

}  // namespace

StepOrderParam zero_from_coords(int k, const std::vector<double>& c) {
  if (k < 1 || c.size() != static_cast<std::size_t>(2 * k - 1)) {
    throw ConfigError("zero_from_coords: expected 2k-1 coordinates");
  }
  StepOrderParam g;
  g.ms.push_back(std::exp(c[0]));
  for (int i = 1; i < k; ++i) {
    const double prev = g.ms.back();
    g.ms.push_back(std::max(prev + std::exp(c[i]), std::nextafter(prev, HUGE_VAL)));
  }
  g.qs = q_from_coords(k, c, static_cast<std::size_t>(k));
  return g;
}

std::vector<double> zero_to_coords(const StepOrderParam& g) {
  require_valid(g);
  std::vector<double> c;
  c.push_back(std::log(std::max(g.ms[0], kFloorExponent)));
  for (std::size_t i = 1; i < g.ms.size(); ++i) c.push_back(std::log(g.ms[i] - g.ms[i - 1]));
  append_q_coords(g.qs, c);
  return c;
}

FiniteTempStepParam finite_from_coords(int k, const std::vector<double>& c) {
  if (k < 1 || c.size() != static_cast<std::size_t>(2 * k - 2)) {
    throw ConfigError("finite_from_coords: expected 2k-2 coordinates");
  }
  FiniteTempStepParam a;
  std::vector<double> totals;
  double t = 0.0;
  for (int i = 0; i < k; ++i) {
    t += std::exp(i + 1 < k ? c[i] : 0.0);
    totals.push_back(t);
  }
  for (int i = 0; i < k; ++i) a.zetas.push_back(i + 1 < k ? totals[i] / t : 1.0);
  a.qs = q_from_coords(k, c, static_cast<std::size_t>(k - 1));
  return a;
}

std::vector<double> finite_to_coords(const FiniteTempStepParam& a) {
  require_valid(a);
  const std::size_t k = a.zetas.size();
  std::vector<double> c;
  // zeta_i = T_i / T_{k-1} with T_{k-1} - T_{k-2} = 1 (v_{k-1} = 0).
  if (k >= 2) {
    const double total = 1.0 / (1.0 - a.zetas[k - 2]);
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const double ti = a.zetas[i] * total;
      c.push_back(std::log(std::max(ti - prev, std::numeric_limits<double>::min())));
      prev = ti;
    }
  }
  std::vector<double> qs = a.qs;
  if (qs.back() >= 1.0) qs.back() = std::nextafter(1.0, 0.0);
  append_q_coords(qs, c);
  return c;
}

std::string OptimResult::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["beta"] = beta;
  j["kind"] = finite() ? "finite" : "zero";
  if (finite()) {
    j["param"] = to_string(alpha());
    j["qs"] = alpha().qs;
    j["zetas"] = alpha().zetas;
  } else {
    j["param"] = to_string(gamma());
    j["qs"] = gamma().qs;
    j["ms"] = gamma().ms;
  }
  j["value"] = value;
  j["evaluations"] = evaluations;
  j["converged"] = converged;
  j["tolerance"] = tolerance;
  return j.dump(2);
}

OptimResult minimize_zero(int k, const MixtureSpec& spec, const OptimOptions& options,
                          const std::optional<StepOrderParam>& initial) {
  if (k < 1) throw ConfigError("minimize_zero: k must be >= 1");
  if (static_cast<std::size_t>(k) > options.chain.max_levels) {
    throw ResourceError("minimize_zero: k exceeds the chain level guard");
  }
  const StepOrderParam start = initial ? *initial : default_zero_start(k);
  if (start.levels() != static_cast<std::size_t>(k)) {
    throw ConfigError("minimize_zero: initial parameter has the wrong number of plateaus");
  }
  const ChainOptions chain = options.chain;
  return run_minimisation<StepOrderParam>(
      k, 0.0, zero_to_coords(start), [k](const std::vector<double>& c) { return zero_from_coords(k, c); },
      [&spec, &chain](const StepOrderParam& g) { return parisi_zero(g, spec, chain); }, options);
}

OptimResult minimize_finite(int k, double beta, const MixtureSpec& spec,
                            const OptimOptions& options,
                            const std::optional<FiniteTempStepParam>& initial) {
  if (k < 1) throw ConfigError("minimize_finite: k must be >= 1");
  if (!(beta > 0.0)) throw DomainError("minimize_finite: beta must be > 0");
  if (static_cast<std::size_t>(k) > options.chain.max_levels) {
    throw ResourceError("minimize_finite: k exceeds the chain level guard");
  }
  const FiniteTempStepParam start = initial ? *initial : default_finite_start(k);
  if (start.levels() != static_cast<std::size_t>(k)) {
    throw ConfigError("minimize_finite: initial parameter has the wrong number of plateaus");
  }
  const ChainOptions chain = options.chain;
  return run_minimisation<FiniteTempStepParam>(
      k, beta, finite_to_coords(start),
      [k](const std::vector<double>& c) { return finite_from_coords(k, c); },
      [&spec, &chain, beta](const FiniteTempStepParam& a) {
        return parisi_finite(a, beta, spec, chain);
      },
      options);
}

std::vector<EscalationStep> escalate(const MixtureSpec& spec, int k_max,
                                     const OptimOptions& options, const SearchOptions& search) {
  if (k_max < 1) throw ConfigError("escalate: k_max must be >= 1");
  std::vector<EscalationStep> steps;
  steps.push_back({minimize_zero(1, spec, options), std::nullopt, std::nullopt});
  for (int k = 2; k <= k_max; ++k) {
    const StepOrderParam& prev = steps.back().result.gamma();
    PerturbationReport report = theorem3_search(prev, spec, options.chain, search);
    std::optional<StepOrderParam> warm;
    std::optional<double> warm_value;
    if (report.success) {
      // Lowest value on the certified run of q's.
      std::size_t pick = report.q_grid.size() - 1;
      for (std::size_t j = 0; j < report.q_grid.size(); ++j) {
        if (report.q_grid[j] >= *report.eta && report.p_values[j] < report.p_values[pick]) pick = j;
      }
      warm = perturb(prev, report.q_grid[pick], report.m_next).materialize();
      warm_value = report.p_values[pick];
    }
    OptimResult result = minimize_zero(k, spec, options, warm);
    steps.push_back({std::move(result), std::move(report), warm_value});
  }
  return steps;
}

BetaSweep beta_sweep(const MixtureSpec& spec, int k, const std::vector<double>& betas,
                     const OptimOptions& options, double cut) {
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0) || (i > 0 && !(betas[i] > betas[i - 1]))) {
      throw ConfigError("beta_sweep: betas must be positive and increasing");
    }
  }
  BetaSweep sweep;
  sweep.cut = cut;
  sweep.zero = minimize_zero(k, spec, options);
  const StepOrderParam& g = sweep.zero.gamma();
  sweep.rows.resize(betas.size());

  OptimOptions inner = options;
  inner.jobs = 1;
  parallel_for(betas.size(), options.jobs, [&](std::size_t i) {
    const double beta = betas[i];
    // Start from gamma / beta with an extra top plateau halfway to 1.
    FiniteTempStepParam start;
    const double scale = std::max(beta, 1.5 * g.ms.back());
    start.qs = g.qs;
    for (double m : g.ms) start.zetas.push_back(m / scale);
    start.qs.push_back(0.5 * (1.0 + g.qs.back()));
    start.zetas.push_back(1.0);
    SweepRow row;
    row.beta = beta;
    row.finite = minimize_finite(k + 1, beta, spec, inner, start);
    row.gap = row.finite.value - sweep.zero.value;
    row.entropy = std::log(2.0) / beta;
    row.l1 = l1_distance(rescale(row.finite.alpha(), beta), g, cut);
    sweep.rows[i] = std::move(row);
  });
  return sweep;
}

std::string BetaSweep::to_csv() const {
  std::ostringstream out;
  out << "beta,finite_value,zero_value,gap,entropy,l1\n";
  for (const auto& r : rows) {
    out << fmt17(r.beta) << ',' << fmt17(r.finite.value) << ',' << fmt17(zero.value) << ','
        << fmt17(r.gap) << ',' << fmt17(r.entropy) << ',' << fmt17(r.l1) << '\n';
  }
  return out.str();
}

}  // namespace parisi
