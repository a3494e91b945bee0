#pragma once

#include <stdexcept>
#include <string>

namespace wgqed {

/// Malformed or inconsistent user input (config files, CLI flags).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The integrator or a series evaluation could not produce a finite result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wgqed
