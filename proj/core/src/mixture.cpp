#include "parisi/mixture.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "parisi/errors.hpp"

namespace parisi {

namespace {

void check_unit(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw DomainError("mixture: argument s=" + std::to_string(s) + " outside [0,1]");
  }
}

}  // namespace

MixtureSpec::MixtureSpec(std::map<int, double> coeffs_squared, double h, int max_degree)
    : h_(h), degree_cap_(max_degree) {
  if (!std::isfinite(h)) throw ConfigError("mixture: field h must be finite");
  for (const auto& [p, c2] : coeffs_squared) {
    if (p < 2) throw ConfigError("mixture: degree " + std::to_string(p) + " < 2");
    if (p > max_degree) {
      throw ConfigError("mixture: degree " + std::to_string(p) + " exceeds cap " +
                        std::to_string(max_degree));
    }
    if (!std::isfinite(c2) || c2 < 0.0) {
      throw ConfigError("mixture: coefficient c_" + std::to_string(p) +
                        "^2 must be finite and >= 0");
    }
    if (c2 > 0.0) terms_.emplace_back(p, c2);
  }
  if (terms_.empty()) throw ConfigError("mixture: at least one c_p^2 must be positive");
}

MixtureSpec MixtureSpec::sk(double h) { return MixtureSpec({{2, 0.5}}, h); }

MixtureSpec MixtureSpec::pure(int p, double h) { return MixtureSpec({{p, 1.0}}, h); }

MixtureSpec MixtureSpec::from_json(std::string_view text, int max_degree) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("mixture: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_object()) {
    throw ConfigError("mixture: expected an object with a \"coeffs\" object");
  }
  std::map<int, double> coeffs;
  for (const auto& [key, value] : j["coeffs"].items()) {
    std::size_t used = 0;
    int p = 0;
    try {
      p = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != key.size()) {
      throw ConfigError("mixture: coefficient key \"" + key + "\" is not an integer");
    }
    if (!value.is_number()) {
      throw ConfigError("mixture: coefficient for degree " + key + " is not a number");
    }
    coeffs[p] += value.get<double>();
  }
  double h = 0.0;
  if (j.contains("h")) {
    if (!j["h"].is_number()) throw ConfigError("mixture: \"h\" is not a number");
    h = j["h"].get<double>();
  }
  return MixtureSpec(std::move(coeffs), h, max_degree);
}

std::string MixtureSpec::to_json() const {
  nlohmann::json j;
  j["coeffs"] = nlohmann::json::object();
  for (const auto& [p, c2] : terms_) j["coeffs"][std::to_string(p)] = c2;
  j["h"] = h_;
  return j.dump();
}

double MixtureSpec::weighted_norm() const {
  double total = 0.0;
  for (const auto& [p, c2] : terms_) total += std::ldexp(c2, p);
  return total;
}

// Horner over the sorted sparse degrees: accumulate from the top degree down,
// multiplying by s^(gap) between consecutive degrees.
double MixtureSpec::xi(double s) const {
  check_unit(s);
  double acc = 0.0;
  int prev = terms_.back().first;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    acc = acc * std::pow(s, prev - it->first) + it->second;
    prev = it->first;
  }
  return acc * std::pow(s, prev);
}

double MixtureSpec::xi_prime(double s) const {
  check_unit(s);
  double acc = 0.0;
  int prev = terms_.back().first;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    acc = acc * std::pow(s, prev - it->first) + it->first * it->second;
    prev = it->first;
  }
  return acc * std::pow(s, prev - 1);
}

double MixtureSpec::xi_dprime(double s) const {
  check_unit(s);
  double acc = 0.0;
  int prev = terms_.back().first;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const int p = it->first;
    acc = acc * std::pow(s, prev - p) + p * (p - 1) * it->second;
    prev = p;
  }
  return acc * std::pow(s, prev - 2);
}

double MixtureSpec::correction_integral(double u, double v) const {
  check_unit(u);
  check_unit(v);
  if (u > v) throw DomainError("correction_integral: requires u <= v");
  double total = 0.0;
  for (const auto& [p, c2] : terms_) {
    total += c2 * (p - 1) * (std::pow(v, p) - std::pow(u, p));
  }
  return total;
}

MixtureSpec MixtureSpec::with_field(double h) const {
  MixtureSpec out = *this;
  if (!std::isfinite(h)) throw ConfigError("mixture: field h must be finite");
  out.h_ = h;
  return out;
}

}  // namespace parisi
