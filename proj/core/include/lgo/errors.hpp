#pragma once

#include <stdexcept>

namespace lgo {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller passed bad data: non-finite values, wrong sizes, parameters out of range.
struct InputError : Error {
  using Error::Error;
};

// Operation is meaningless for the given state, e.g. an empty trial set.
struct DomainError : Error {
  using Error::Error;
};

// A partition update produced inconsistent geometry (overlap, escape, lost volume).
struct StructuralError : Error {
  using Error::Error;
};

// Test-class generation could not satisfy its placement constraints.
struct GenerationError : Error {
  using Error::Error;
};

// Report files could not be written or parsed.
struct IoError : Error {
  using Error::Error;
};

// An evaluation was requested after the trial budget ran out.
struct BudgetExhausted : Error {
  using Error::Error;
};

// An observer asked the running solve to stop before the next evaluation.
struct StopRequested : Error {
  using Error::Error;
};

}  // namespace lgo
