#include "parisi/order_param.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "parisi/errors.hpp"

namespace parisi {

namespace {

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("order parameter: cannot parse number \"" + std::string(s) + "\"");
  }
  return value;
}

using Pairs = std::vector<std::pair<double, double>>;

Pairs parse_pairs(std::string_view text) {
  Pairs out;
  std::string_view trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) {
    trimmed.remove_prefix(1);
  }
  if (!trimmed.empty() && trimmed.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(trimmed);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("order parameter: invalid JSON: ") + e.what());
    }
    for (const auto& item : j) {
      if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
        throw ConfigError("order parameter: JSON entries must be [q, value] pairs");
      }
      out.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = text.find(',', start);
      const std::string_view item =
          text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                            : comma - start);
      const std::size_t colon = item.find(':');
      if (colon == std::string_view::npos) {
        throw ConfigError("order parameter: expected \"q:value\", got \"" + std::string(item) +
                          "\"");
      }
      out.emplace_back(parse_double(item.substr(0, colon)), parse_double(item.substr(colon + 1)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  if (out.empty()) throw ConfigError("order parameter: empty");
  return out;
}

// Piecewise-constant function on [0, 1): breakpoints and values.
struct Steps {
  std::vector<double> at;
  std::vector<double> value;

  double operator()(double t) const {
    const auto it = std::upper_bound(at.begin(), at.end(), t);
    if (it == at.begin()) return value.front();
    return value[static_cast<std::size_t>(it - at.begin()) - 1];
  }
};

double l1_between(const Steps& a, const Steps& b, double upper) {
  std::vector<double> cuts = a.at;
  cuts.insert(cuts.end(), b.at.begin(), b.at.end());
  cuts.push_back(0.0);
  cuts.push_back(upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = std::min(cuts[i + 1], upper);
    if (lo >= upper) break;
    if (hi <= lo) continue;
    total += (hi - lo) * std::fabs(a(lo) - b(lo));
  }
  return total;
}

Steps steps_of(const StepOrderParam& g) { return {g.qs, g.ms}; }

}  // namespace

double StepOrderParam::value_at(double t) const { return steps_of(*this)(t); }

double FiniteTempStepParam::value_at(double t) const {
  if (t >= qs.back()) return 1.0;
  return Steps{qs, zetas}(t);
}

StepOrderParam PerturbedParam::materialize() const {
  StepOrderParam out = base;
  out.qs.push_back(q);
  out.ms.push_back(m_next);
  return out;
}

std::vector<std::string> validate(const StepOrderParam& g) {
  std::vector<std::string> issues;
  if (g.qs.empty() || g.ms.empty()) {
    issues.emplace_back("qs and ms must be non-empty");
    return issues;
  }
  if (g.qs.size() != g.ms.size()) issues.emplace_back("qs and ms must have equal length");
  for (double v : g.qs) {
    if (!std::isfinite(v)) issues.emplace_back("qs must be finite");
  }
  for (double v : g.ms) {
    if (!std::isfinite(v)) issues.emplace_back("ms must be finite");
  }
  if (g.qs.front() != 0.0) issues.emplace_back("q_0 must equal 0");
  for (std::size_t i = 1; i < g.qs.size(); ++i) {
    if (!(g.qs[i] - g.qs[i - 1] > kAtomMergeTolerance)) {
      issues.emplace_back("qs not strictly increasing at index " + std::to_string(i));
    }
  }
  if (!(g.qs.back() < 1.0)) issues.emplace_back("q_n < 1 required");
  if (!(g.ms.front() >= 0.0)) issues.emplace_back("m_0 >= 0 required");
  for (std::size_t i = 1; i < g.ms.size(); ++i) {
    if (!(g.ms[i] > g.ms[i - 1])) {
      issues.emplace_back("ms not increasing at index " + std::to_string(i));
    }
  }
  return issues;
}

std::vector<std::string> validate(const FiniteTempStepParam& a) {
  std::vector<std::string> issues;
  if (a.qs.empty() || a.zetas.empty()) {
    issues.emplace_back("qs and zetas must be non-empty");
    return issues;
  }
  if (a.qs.size() != a.zetas.size()) issues.emplace_back("qs and zetas must have equal length");
  if (a.qs.front() != 0.0) issues.emplace_back("q_0 must equal 0");
  for (std::size_t i = 1; i < a.qs.size(); ++i) {
    if (!(a.qs[i] - a.qs[i - 1] > kAtomMergeTolerance)) {
      issues.emplace_back("qs not strictly increasing at index " + std::to_string(i));
    }
  }
  if (!(a.qs.back() <= 1.0)) issues.emplace_back("q_n <= 1 required");
  if (!(a.zetas.front() >= 0.0)) issues.emplace_back("zeta_0 >= 0 required");
  for (std::size_t i = 1; i < a.zetas.size(); ++i) {
    if (!(a.zetas[i] >= a.zetas[i - 1])) {
      issues.emplace_back("zetas not nondecreasing at index " + std::to_string(i));
    }
  }
  if (a.zetas.back() != 1.0) issues.emplace_back("zeta_n = 1 required");
  return issues;
}

namespace {

template <class P>
void require_valid_impl(const P& p, const char* what) {
  const auto issues = validate(p);
  if (issues.empty()) return;
  std::ostringstream msg;
  msg << what << " invalid:";
  for (const auto& s : issues) msg << ' ' << s << ';';
  throw DomainError(msg.str());
}

}  // namespace

void require_valid(const StepOrderParam& g) { require_valid_impl(g, "gamma"); }
void require_valid(const FiniteTempStepParam& a) { require_valid_impl(a, "alpha"); }

PerturbedParam perturb(const StepOrderParam& base, double q, double m_next) {
  require_valid(base);
  const double qn = base.qs.back();
  const double mn = base.ms.back();
  if (!(q > qn + kAtomMergeTolerance)) {
    throw DomainError("perturb: q=" + fmt(q) + " must exceed q_n=" + fmt(qn));
  }
  if (!(q < 1.0)) throw DomainError("perturb: q=" + fmt(q) + " must be < 1");
  if (!(m_next > mn)) {
    throw DomainError("perturb: m_next=" + fmt(m_next) + " must exceed m_n=" + fmt(mn));
  }
  return PerturbedParam{base, q, m_next};
}

double l1_distance(const StepOrderParam& a, const StepOrderParam& b) {
  return l1_distance(a, b, 1.0);
}

double l1_distance(const StepOrderParam& a, const StepOrderParam& b, double upper) {
  return l1_between(steps_of(a), steps_of(b), upper);
}

StepOrderParam rescale(const FiniteTempStepParam& alpha, double beta) {
  StepOrderParam out;
  for (std::size_t i = 0; i < alpha.qs.size(); ++i) {
    out.qs.push_back(alpha.qs[i]);
    out.ms.push_back(beta * alpha.zetas[i]);
  }
  return out;
}

std::string to_string(const StepOrderParam& g) {
  std::string out;
  for (std::size_t i = 0; i < g.qs.size(); ++i) {
    if (i) out += ',';
    out += fmt(g.qs[i]) + ':' + fmt(g.ms[i]);
  }
  return out;
}

std::string to_string(const FiniteTempStepParam& a) {
  std::string out;
  for (std::size_t i = 0; i < a.qs.size(); ++i) {
    if (i) out += ',';
    out += fmt(a.qs[i]) + ':' + fmt(a.zetas[i]);
  }
  return out;
}

StepOrderParam parse_step_param(std::string_view text) {
  StepOrderParam g;
  for (const auto& [q, m] : parse_pairs(text)) {
    g.qs.push_back(q);
    g.ms.push_back(m);
  }
  return g;
}

FiniteTempStepParam parse_finite_param(std::string_view text) {
  FiniteTempStepParam a;
  for (const auto& [q, z] : parse_pairs(text)) {
    a.qs.push_back(q);
    a.zetas.push_back(z);
  }
  return a;
}

}  // namespace parisi
