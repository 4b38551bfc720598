#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cohort {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (transcripts, trees, CSV, lexicons, model dumps).
/// `line` is 1-based; `column` is a 0-based byte offset when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Data violates a domain invariant (duplicate ids, conflicting diagnoses, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration: unknown feature, unknown model kind, missing field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but too degenerate for the requested computation.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerics failed (non-convergence, divergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace cohort
