#pragma once

#include <stdexcept>
#include <string>

namespace logbesov {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input data.
class InputError : public Error {
public:
  using Error::Error;
};

/// Object placed outside the periodic domain, or an index out of range.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Request finer than the sampling grid can resolve.
class ResolutionError : public Error {
public:
  using Error::Error;
};

/// Operation not available for the requested parameters.
class CapabilityError : public Error {
public:
  using Error::Error;
};

/// Construction produced an identically zero or otherwise unusable result.
class DegenerateInputError : public Error {
public:
  using Error::Error;
};

/// Kernel calibration found no admissible cell.
class CalibrationError : public Error {
public:
  explicit CalibrationError(const std::string &what, double best = 0.0)
      : Error(what), best_lambda(best) {}
  double best_lambda;
};

/// Invalid configuration or parameter value.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Frequency at or beyond the Nyquist limit.
class AliasingError : public Error {
public:
  using Error::Error;
};

} // namespace logbesov
