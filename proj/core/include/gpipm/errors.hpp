#pragma once

#include <stdexcept>
#include <string>

namespace gpipm {

/// Base class of all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: dimension mismatches, bad parameters, malformed files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A point violates the strict feasibility requirements of a barrier domain.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

/// Linear-algebra breakdown or a failed post-hoc accuracy check.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The solver exceeded its certified iteration budget or its slacks collapsed.
/// Usually indicates a violated promise (e.g. a shift outside the polytope).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A full Newton step left the domain. Carries the decrement at the step's
/// origin; a value below 1 here means an upstream contract was violated.
class StepError : public Error {
 public:
  StepError(const std::string& what, double decrement)
      : Error(what), decrement_(decrement) {}

  double decrement() const noexcept { return decrement_; }

 private:
  double decrement_;
};

}  // namespace gpipm
