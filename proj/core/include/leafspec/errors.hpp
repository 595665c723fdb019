#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace leafspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid numeric parameter (non-positive radius, p <= 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Sampled geometry is unusable: self-intersections, coincident nodes.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The requested scales are not resolved by the discretization.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Scenario or operator configuration is inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input samples are malformed (non-finite values, size mismatch).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A one-sided limit of a coefficient vanishes.
class DegenerateSymbolError : public Error {
 public:
  using Error::Error;
};

/// An operator expression references an unknown coefficient or label.
class ReferenceError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A documented precondition on matrix arguments was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A JSON document does not match its schema. `pointer` locates the
/// offending value (RFC 6901).
class SchemaError : public ConfigError {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : ConfigError(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace leafspec
