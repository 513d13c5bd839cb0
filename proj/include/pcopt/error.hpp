#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcopt {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad arguments, dimension mismatches, invalid
/// distributions, unknown identifiers.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a problem file, carrying a 1-based position.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Arithmetic failure: division by zero, non-finite values, under-resolved
/// quadrature.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An inner optimization needed to produce a result did not succeed.
class SolveError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcopt
