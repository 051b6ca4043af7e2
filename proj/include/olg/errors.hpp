#pragma once

#include <stdexcept>
#include <string>

namespace olg {

/// Parameters fall outside the regime the asymptotic formulas cover
/// (e.g. sigma <= 1 or G <= 1 where a long-run factor-price limit is needed).
class UnsupportedRegime : public std::domain_error {
 public:
  explicit UnsupportedRegime(const std::string& what) : std::domain_error(what) {}
};

/// An equilibrium construction is infeasible for the given parameters.
/// Carries the name and value of the violated bound so callers can report it.
class ConstructiveFailure : public std::runtime_error {
 public:
  ConstructiveFailure(std::string bound_name, double bound_value, double actual,
                      const std::string& what)
      : std::runtime_error(what),
        bound_name_(std::move(bound_name)),
        bound_value_(bound_value),
        actual_(actual) {}

  const std::string& bound_name() const noexcept { return bound_name_; }
  double bound_value() const noexcept { return bound_value_; }
  double actual() const noexcept { return actual_; }

 private:
  std::string bound_name_;
  double bound_value_;
  double actual_;
};

/// A numeric diagnostic cannot produce a trustworthy answer
/// (e.g. a difference quotient dominated by rounding).
class DiagnosticError : public std::runtime_error {
 public:
  explicit DiagnosticError(const std::string& what) : std::runtime_error(what) {}
};

/// A run/report configuration is malformed.  line 0 means the problem is
/// file-level (e.g. a required key never appeared).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? "config: " + what
                                     : "config line " + std::to_string(line) + ": " +
                                           what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace olg
