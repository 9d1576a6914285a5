#pragma once

#include <stdexcept>
#include <string>

namespace ctm {

/// Raised when caller-supplied values violate a documented precondition
/// (evidence overflow, out-of-range parameters, malformed input files).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operator is evaluated at a point where it is undefined,
/// e.g. AND with f_A = f_B = 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ctm
