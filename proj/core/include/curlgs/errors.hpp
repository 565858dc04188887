// Error hierarchy. RegimeError and ConfigError are user-facing refusals
// (exit code 2 in the CLI); everything else is an internal failure (exit 1).
#pragma once

#include <stdexcept>
#include <string>

namespace curlgs {

// Request is outside the regime the solver supports (e.g. lambda > 0 for the
// ground-state command, indefinite reduced quadratic form, supercritical p).
class RegimeError : public std::runtime_error {
 public:
  explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structural misuse of the library (incompatible index sets, wrong basis).
class StructuralError : public std::logic_error {
 public:
  explicit StructuralError(const std::string& msg) : std::logic_error(msg) {}
};

// Quadrature grid too coarse for the requested operation. Carries the
// per-axis minimum resolution that would have been required.
class AliasingError : public std::runtime_error {
 public:
  AliasingError(const std::string& msg, int required_n1, int required_n2, int required_n3)
      : std::runtime_error(msg), required{required_n1, required_n2, required_n3} {}
  int required[3];
};

// Iterative solver failed to reach its tolerance within budget.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace curlgs
