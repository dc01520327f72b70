#pragma once

#include <stdexcept>
#include <string>

namespace walkrange {

// Bad user input: unknown tokens, malformed literals, mixed-group operands.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation not available for the given group or law.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Mathematical precondition violated (recurrent law passed to green, j = 0 ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// File could not be read or written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace walkrange
