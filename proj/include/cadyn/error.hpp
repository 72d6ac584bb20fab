#pragma once

#include <stdexcept>
#include <string>

namespace cadyn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (short word, bad offset, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An explicit budget (table entries, subset count, steps) was exhausted.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Rule file, rule shorthand or word could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Two rules or configurations over different alphabets were combined.
class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

/// Phase words of a column trace collide inconsistently, so the phase map is
/// not a function on cylinders.
class IllDefinedFactorError : public Error {
 public:
  IllDefinedFactorError(std::string what, std::size_t first, std::size_t second)
      : Error(std::move(what)), first_phase(first), second_phase(second) {}

  std::size_t first_phase;
  std::size_t second_phase;
};

}  // namespace cadyn
