#include "parisi/functional.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "parisi/errors.hpp"
#include "parisi/format.hpp"

namespace parisi {

namespace {

double zero_correction(const StepOrderParam& g, const MixtureSpec& spec) {
  double total = 0.0;
  for (std::size_t i = 0; i < g.levels(); ++i) {
    const double upper = i + 1 < g.levels() ? g.qs[i + 1] : 1.0;
    total += g.ms[i] * spec.correction_integral(g.qs[i], upper);
  }
  return 0.5 * total;
}

}  // namespace

ParisiBreakdown parisi_zero_breakdown(const StepOrderParam& gamma, const MixtureSpec& spec,
                                      const ChainOptions& options) {
  ParisiBreakdown out;
  out.psi = psi_zero(gamma, spec, options).psi;
  out.correction = zero_correction(gamma, spec);
  out.value = out.psi - out.correction;
  return out;
}

double parisi_zero(const StepOrderParam& gamma, const MixtureSpec& spec,
                   const ChainOptions& options) {
  return parisi_zero_breakdown(gamma, spec, options).value;
}

ParisiBreakdown parisi_finite_breakdown(const FiniteTempStepParam& alpha, double beta,
                                        const MixtureSpec& spec, const ChainOptions& options) {
  ParisiBreakdown out;
  out.psi = std::log(2.0) / beta + psi_finite(alpha, beta, spec, options).psi;
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.levels(); ++i) {
    const double upper = i + 1 < alpha.levels() ? alpha.qs[i + 1] : 1.0;
    total += alpha.zetas[i] * spec.correction_integral(alpha.qs[i], upper);
  }
  out.correction = 0.5 * beta * total;
  out.value = out.psi - out.correction;
  return out;
}

double parisi_finite(const FiniteTempStepParam& alpha, double beta, const MixtureSpec& spec,
                     const ChainOptions& options) {
  return parisi_finite_breakdown(alpha, beta, spec, options).value;
}

PerturbedEvaluation evaluate_perturbed(const PerturbedParam& p, const MixtureSpec& spec,
                                       const ChainOptions& options) {
  const ChainEvaluation chain = psi_zero_perturbed(p, spec, options);
  const StepOrderParam& g = p.base;
  const std::size_t n = g.top();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += g.ms[i] * spec.correction_integral(g.qs[i], g.qs[i + 1]);
  total += g.ms[n] * spec.correction_integral(g.qs[n], p.q);
  total += p.m_next * spec.correction_integral(p.q, 1.0);
  PerturbedEvaluation out;
  out.value = chain.psi - 0.5 * total;
  out.phi = chain.aux;
  out.dq = 0.5 * spec.xi_dprime(p.q) * (p.m_next - g.ms[n]) * (p.q - out.phi);
  return out;
}

double parisi_perturbed(const PerturbedParam& p, const MixtureSpec& spec,
                        const ChainOptions& options) {
  return evaluate_perturbed(p, spec, options).value;
}

double phi(const PerturbedParam& p, const MixtureSpec& spec, const ChainOptions& options) {
  return evaluate_perturbed(p, spec, options).phi;
}

double dq_parisi(const PerturbedParam& p, const MixtureSpec& spec, const ChainOptions& options) {
  return evaluate_perturbed(p, spec, options).dq;
}

std::vector<double> default_m_grid(const StepOrderParam& base) {
  const double scale = std::max(base.ms.back(), 1.0);
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(scale * std::ldexp(1.0, k));
  return grid;
}

std::vector<double> default_q_grid(const StepOrderParam& base, int depth) {
  const double gap = 1.0 - base.qs.back();
  std::vector<double> grid;
  for (int j = 1; j <= depth; ++j) grid.push_back(1.0 - std::ldexp(gap, -j));
  return grid;
}

PerturbationReport theorem3_search(const StepOrderParam& base, const MixtureSpec& spec,
                                   const ChainOptions& options, const SearchOptions& search) {
  require_valid(base);
  const std::vector<double> m_grid = search.m_grid.empty() ? default_m_grid(base) : search.m_grid;
  const std::vector<double> q_grid = search.q_grid.empty() ? default_q_grid(base) : search.q_grid;
  for (std::size_t j = 0; j < q_grid.size(); ++j) {
    if (!(q_grid[j] > base.qs.back() && q_grid[j] < 1.0) || (j > 0 && !(q_grid[j] > q_grid[j - 1]))) {
      throw ConfigError("theorem3_search: q grid must increase inside (q_n, 1)");
    }
  }
  ChainOptions inner = options;
  if (search.jobs > 1) inner.jobs = 1;

  PerturbationReport best;
  best.base = base;
  best.q_grid = q_grid;
  best.p_base = parisi_zero(base, spec, options);
  std::size_t best_suffix = 0;
  bool have_best = false;

  for (double m_next : m_grid) {
    if (!(m_next > base.ms.back())) continue;
    const std::size_t count = q_grid.size();
    std::vector<PerturbedEvaluation> evals(count);
    parallel_for(count, search.jobs, [&](std::size_t j) {
      evals[j] = evaluate_perturbed(perturb(base, q_grid[j], m_next), spec, inner);
    });
    std::size_t suffix = 0;
    while (suffix < count && evals[count - 1 - suffix].value < best.p_base) ++suffix;
    best.tried_m.push_back(m_next);
    best.tried_suffix.push_back(suffix);

    if (!have_best || suffix > best_suffix) {
      have_best = true;
      best_suffix = suffix;
      best.m_next = m_next;
      best.p_values.clear();
      best.dq_values.clear();
      best.phi_values.clear();
      for (const auto& e : evals) {
        best.p_values.push_back(e.value);
        best.dq_values.push_back(e.dq);
        best.phi_values.push_back(e.phi);
      }
    }
    if (suffix >= search.min_suffix) {
      best.success = true;
      best.eta = q_grid[count - suffix];
      break;
    }
  }
  return best;
}

std::string PerturbationReport::to_csv() const {
  std::ostringstream out;
  out << "q,P_gamma_q,dq_P,phi\n";
  for (std::size_t j = 0; j < q_grid.size() && j < p_values.size(); ++j) {
    out << fmt17(q_grid[j]) << ',' << fmt17(p_values[j]) << ',' << fmt17(dq_values[j]) << ','
        << fmt17(phi_values[j]) << '\n';
  }
  return out.str();
}

std::string PerturbationReport::to_json() const {
  nlohmann::json j;
  j["base"] = to_string(base);
  j["m_next"] = m_next;
  j["q_grid"] = q_grid;
  j["p_base"] = p_base;
  j["p_values"] = p_values;
  j["dq_values"] = dq_values;
  j["phi_values"] = phi_values;
  j["eta"] = eta ? nlohmann::json(*eta) : nlohmann::json(nullptr);
  j["success"] = success;
  j["tried_m"] = tried_m;
  j["tried_suffix"] = tried_suffix;
  return j.dump(2);
}

}  // namespace parisi
