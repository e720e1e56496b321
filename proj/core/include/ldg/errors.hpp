// Exception hierarchy shared by every guidance module.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ldg {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (zero radius, tf <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Spherical frame is undefined at the poles (cos(phi) == 0).
class SingularFrameError : public Error {
 public:
  using Error::Error;
};

/// Linear mass law or propagation drove the mass to a non-positive value.
class InfeasibleBurnError : public Error {
 public:
  using Error::Error;
};

/// The trajectory went below the surface guard before the requested event.
class ImpactError : public Error {
 public:
  ImpactError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Newton iteration did not reach the requested residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// Newton Jacobian could not be factored.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Requested initial along-track angle is outside the thrust-reachable envelope.
class UnreachableError : public Error {
 public:
  UnreachableError(const std::string& what, double required_thrust)
      : Error(what), required_thrust_(required_thrust) {}
  double required_thrust() const noexcept { return required_thrust_; }

 private:
  double required_thrust_;
};

/// A phase-entry gate (VGA conditions, divert bounds, ...) is not met.
class GateFailure : public Error {
 public:
  using Error::Error;
};

/// Failure of one phase of the end-to-end assembly.
class PhaseError : public Error {
 public:
  PhaseError(std::string phase, const std::string& what)
      : Error(phase + ": " + what), phase_(std::move(phase)) {}
  const std::string& phase() const noexcept { return phase_; }

 private:
  std::string phase_;
};

/// Malformed configuration or design file.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> keys = {})
      : Error(what), keys_(std::move(keys)) {}
  const std::vector<std::string>& offending_keys() const noexcept { return keys_; }

 private:
  std::vector<std::string> keys_;
};

}  // namespace ldg
