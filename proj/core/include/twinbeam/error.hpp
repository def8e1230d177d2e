#pragma once

#include <stdexcept>
#include <string>

namespace twinbeam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// SVD non-convergence, non-finite intermediate values.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// A normalized moment whose denominator vanishes, or a conditional moment
// whose conditioning event has (numerically) zero probability.
class UndefinedMoment : public Error {
 public:
  using Error::Error;
};

// Request exceeds a configured complexity or dimension guard.
class Refused : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConfigParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ValidationError : public ConfigError {
 public:
  ValidationError(std::string field, const std::string& what)
      : ConfigError(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace twinbeam
