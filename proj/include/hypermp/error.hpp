#pragma once

#include <stdexcept>
#include <string>

namespace hypermp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but violates a structural invariant (node id out of range,
/// duplicate node in a hyperedge, empty hyperedge, bad label, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument was not met.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace hypermp
