#pragma once

#include <stdexcept>
#include <string>

namespace eprsim {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Incompatible dimensions or layouts (wrong operator size, mismatched
/// registers, out-of-range register index).
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// A caller-supplied argument violates a precondition (empty keep set,
/// duplicate labels, degenerate statistical input, ...).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// Structured input (config files, matrices built from user data) failed
/// validation against its schema or numerical invariants.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Malformed textual input that could not be parsed at all.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// An internal invariant was violated; indicates a bug, not bad input.
class InternalError : public Error {
  public:
    using Error::Error;
};

} // namespace eprsim
