#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace localmath {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structure was requested with scaling factor 0.
class DegenerateStructure : public Error {
 public:
  DegenerateStructure() : Error("degenerate structure: scaling factor must be nonzero") {}
};

/// Operands live in different scaled structures. Arithmetic is only defined
/// inside one local structure; transport first.
class StructureMismatch : public Error {
 public:
  using Error::Error;
};

/// Division by a zero-valued number, spacelike segments, bad ranges.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation produced a non-finite number.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  /// The same error reported inside `context`, e.g. a configuration key.
  ParseError(const std::string& context, const ParseError& inner)
      : Error(context + ": " + inner.what()), line_(inner.line_), column_(inner.column_) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Malformed configuration file or command-line value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace localmath
