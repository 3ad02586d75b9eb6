#pragma once

#include <stdexcept>
#include <string>

namespace hsalpha {

/// Bad user input: malformed files, out-of-range parameters, unsupported options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state failed a structural check (membership in the Eulerian or
/// Lagrangian set, projection preconditions, root bracketing).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsalpha
