#pragma once

#include <stdexcept>
#include <string>

namespace sepmot {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid input: bad parameters, violated preconditions, malformed config.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A requested feature is outside the supported range (e.g. too high order).
class UnsupportedError : public InputError {
 public:
  using InputError::InputError;
};

/// Problem size exceeds a configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A quadrature or solver failed to reach its accuracy target.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// An iterative solve did not converge within its iteration budget.
class IterationError : public Error {
 public:
  using Error::Error;
};

/// Energy argument hit a pole of a resolvent.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Channel-function phase tracking lost continuity between grid points.
class PhaseTrackingError : public Error {
 public:
  using Error::Error;
};

/// Overlap kernel too ill-conditioned to solve, even after truncation.
class IllConditioningError : public Error {
 public:
  using Error::Error;
};

/// Every overlap eigenvalue fell below the truncation threshold.
class DegenerateBasisError : public Error {
 public:
  using Error::Error;
};

/// Minimum search ended on a saddle point.
class SaddleError : public Error {
 public:
  using Error::Error;
};

/// A root bracketing or search range contains no solution.
class NoSolutionError : public InputError {
 public:
  using InputError::InputError;
};

/// Too few valid data points for a statistical detector.
class InsufficientDataError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace sepmot
