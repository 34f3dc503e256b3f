#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cq {

/// Base for all errors raised by the library. Carries no extra state; the
/// subclasses exist so callers (the CLI in particular) can map them onto exit
/// codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation in an API call.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A numerical routine failed (non-finite values, degenerate input).
class NumericError : public Error {
public:
  using Error::Error;
};

}  // namespace cq
