#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitpar {

/// Bad arguments: sizes, ranges, malformed configuration.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested splitting cannot represent the operator (ADI with mixed derivatives).
class UnsupportedSplitting : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stepper used out of order, e.g. a two-level step without history.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::ptrdiff_t pivot = -1, double residual = -1.0)
      : std::runtime_error(what), pivot_(pivot), residual_(residual) {}

  /// Global row of the failed pivot, -1 if not a factorization failure.
  std::ptrdiff_t pivot() const noexcept { return pivot_; }
  /// Relative residual reached by an iterative solve, -1 if not applicable.
  double residual() const noexcept { return residual_; }

 private:
  std::ptrdiff_t pivot_;
  double residual_;
};

}  // namespace splitpar
