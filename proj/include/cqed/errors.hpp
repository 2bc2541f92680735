#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

// Error taxonomy. `kind()` strings are stable identifiers used by the CLI
// to emit machine-readable error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Invalid or missing configuration. `field` is the dotted path of the
// offending entry ("params.g").
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : Error("config", field.empty() ? message : field + ": " + message),
        field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class UnitError : public Error {
 public:
  explicit UnitError(const std::string& message) : Error("unit", message) {}
};

// Integrator step-control failure or singular linear solve.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& message) : Error("solver", message) {}
};

// Population leaked into the top Fock level beyond tolerance; the result
// cannot be trusted at the current truncation.
class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string& message)
      : Error("truncation", message) {}
};

class UnsupportedFeatureError : public Error {
 public:
  explicit UnsupportedFeatureError(const std::string& message)
      : Error("unsupported", message) {}
};

}  // namespace cqed
