#pragma once

#include <stdexcept>

namespace mzi {

// Thrown when no particle reaches the monitored output ports, i.e. the
// post-selection normalizer 1 + S_x (t - r) vanishes. The CLI maps this to
// its "degenerate physics" exit code.
struct DegenerateConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when the two detector hypotheses coincide (overlap at 1 within
// tolerance); error-free discrimination is undefined there.
struct IndistinguishableStates : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computed result broke one of the library's enforced inequalities.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mzi
