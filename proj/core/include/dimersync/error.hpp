#pragma once

#include <stdexcept>
#include <string>

namespace dimersync {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration or inconsistent inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes that do not match the chain they are used with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The non-Hermitian single-particle matrix is (numerically) defective:
/// its eigenvector basis degenerates and the mode expansion is undefined.
class ExceptionalPointError : public Error {
 public:
  using Error::Error;
};

/// Integration or evaluation failed (step size underflow, window outside
/// the sampled domain, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dimersync
