#pragma once

#include <stdexcept>

namespace collapse {

// Error taxonomy maps one-to-one onto CLI exit codes:
// ValidationError -> 2, NonConvergenceError -> 3, NumericalError -> 4.

// Bad input: violated type invariant, dimension mismatch, unknown config key,
// zero-probability outcome, ambiguous classification.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An integration hit its time cap without reaching the required residual.
struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal numerical failure: step-size underflow, guard breach beyond
// repair, inconsistent spectral data.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace collapse
