#pragma once

#include <stdexcept>
#include <string>

namespace parisi {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or out-of-range configuration (rule orders, parameter strings, JSON).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A cost guard refused the request (too many levels, too many spins).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical evaluation produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double where)
      : std::runtime_error(what), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_;
};

}  // namespace parisi
