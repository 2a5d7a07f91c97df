#pragma once

#include <stdexcept>
#include <string>

namespace lpcond {

/// Malformed user input (address out of range, bad flag value, ...).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A distribution or model parameter lies outside its admissible range.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// More balls than urns.
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

/// An exact oracle was asked for a configuration beyond its feasibility guard.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The conditioning event {S_N = m} has probability zero.
struct ConditioningError : std::domain_error {
  using std::domain_error::domain_error;
};

/// The model has sigma_X = 0 (or another degeneracy that breaks a projection).
struct DegenerateModelError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A hypothesis of the Berry-Esseen constant pipeline is violated.
struct HypothesisError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

}  // namespace lpcond
