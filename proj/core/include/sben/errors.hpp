#pragma once

#include <stdexcept>
#include <string>

namespace sben {

/// Operands of incompatible dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid model or run configuration. `field()` holds the dotted path of the
/// offending entry (e.g. "scenario.beta").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical procedure failed its own budget (too many flagged steps,
/// non-mixing sampler, divergent quadrature).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the model (e.g. the sign condition on the dissipation
/// potential) does not hold.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sben
