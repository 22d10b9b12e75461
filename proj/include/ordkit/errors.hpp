#pragma once

#include <stdexcept>
#include <string>

namespace ordkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (words, order specs, numbers).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation was applied outside its domain: mixed group families,
/// the sign of the identity, an element outside a realized prefix, a
/// violated precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured resource bound was hit (handle-reduction step cap, ball
/// element cap, search region cap). Not a mathematical failure.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ordkit
