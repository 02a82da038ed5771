#pragma once

#include <stdexcept>
#include <string>

namespace driftbench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite entries, dimension mismatch, bad parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A point outside the domain of a regularizer (or where its gradient diverges).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A body that admits no meaningful projection (e.g. radius zero).
class DegenerateBody : public Error {
 public:
  using Error::Error;
};

/// An iterative method stopped before meeting its tolerance.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace driftbench
