#pragma once

#include <stdexcept>
#include <string>

namespace primelab {

// Caller passed something outside an operation's domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but leaves nothing to compute (empty range, zero denominator).
class DegenerateInputError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Memory budget or supported numeric range exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace primelab
