#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input to a constructor or an operation (empty sample, bad parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Query outside the domain an object covers (time past a path horizon,
// probability outside (0,1)).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Malformed model or run configuration, or an incompatible coupling mode.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A model produced a value outside its declared state space.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for the given configuration (e.g. a closed form
// requested outside the specialization where it exists).
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

// Too few observations for an estimator.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// A simulated state became non-finite. Carries the step (or jump) index at
// which it happened.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::size_t step)
      : Error(what + " at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace mmm
