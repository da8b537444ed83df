#pragma once

#include <stdexcept>
#include <string>

namespace qfc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (unsorted input, probability outside [0,1], ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value or malformed scenario/flag. Mapped to a usage error by the CLI.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Physical domain violation, e.g. lambda_in >= lambda_p for down-conversion.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Event count would exceed the configured memory cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Histogram cannot be normalized (zero rate or zero integration time).
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Degenerate or failed curve fit.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Tag or curve file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfc
