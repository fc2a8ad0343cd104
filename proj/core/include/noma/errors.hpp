#pragma once

#include <stdexcept>
#include <string>

namespace noma {

/// A parameter violated its documented precondition. `field()` names the
/// offending input so front ends can point at it.
class ParamError : public std::invalid_argument {
 public:
  ParamError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integration stopped at its subdivision limit above tolerance.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& message, double achieved_error)
      : NumericalError(message), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// The printed cooperative kernel has a non-integrable singularity for the
/// requested argument.
class DivergentKernelError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace noma
