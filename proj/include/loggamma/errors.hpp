#pragma once

#include <stdexcept>
#include <string>

namespace loggamma {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Argument within the pole-proximity threshold of a singularity.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Result magnitude exceeds the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Iterative scheme or truncated series failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Contour construction with infeasible geometry.
class GeometryError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical breakdown downstream of valid inputs (singular factorization,
/// non-finite kernel values, imaginary residue on a real quantity).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace loggamma
