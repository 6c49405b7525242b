#pragma once

#include <stdexcept>
#include <string>

namespace mgsizer {

// Raised when a parameter block or experiment config fails validation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a model invariant is broken at run time (e.g. a battery step
// that leaves the energy window).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mgsizer
