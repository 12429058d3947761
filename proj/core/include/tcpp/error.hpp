#pragma once

#include <stdexcept>
#include <string>

namespace tcpp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gamma evaluated at a non-positive integer.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative or adaptive numerical method ran out of budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A grid has too few points for the requested stencil.
class GridError : public Error {
 public:
  using Error::Error;
};

/// The requested computation is not available for the given process
/// (e.g. no density evaluator, no closed form).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Malformed process description, campaign file or request.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A Monte Carlo sampler exceeded its rejection or grid budget.
class SamplingBudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcpp
