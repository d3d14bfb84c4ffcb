#pragma once

#include <stdexcept>
#include <string>

namespace glauber {

/// Bad arguments: a point outside the box, nonpositive spacing, malformed config.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Model-level violation: divergent interaction integral, missing positivity,
/// box incompatible with the potential range.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical accuracy not reached (quadrature error estimate above tolerance).
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Estimation failure: zero-variance observable, unusable fit window.
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact enumeration asked for more states than the dense solvers can hold.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Perfect sampler exhausted its backward window without coalescing.
struct CoalescenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace glauber
