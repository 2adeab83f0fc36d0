#pragma once

#include <stdexcept>
#include <string>

namespace rsd {

// Argument outside the mathematical domain of an operation (never clamped).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical scheme failed to converge or produced a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantity is undefined for the given inputs, e.g. a bound whose
// denominator vanishes or an unbounded expected running time.
class BoundUndefinedError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DimensioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested operation needs something the problem does not provide
// (e.g. the exact violation oracle on a problem without analytic V).
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Scenario solve did not return an optimum.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rsd
