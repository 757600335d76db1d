#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldffed {

/// Base class for all errors raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Manifest, data file, or query could not be loaded.
class LoadError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public LoadError {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : LoadError(what + " at line " + std::to_string(line) + ", column " +
                  std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// The client broke the protocol of a service, e.g. sent a VALUES block to a
/// TPF server or asked a TPF server to count a BGP. Distinct from the empty
/// answer a service returns for an expression outside its language.
class InterfaceViolation : public Error {
 public:
  using Error::Error;
};

class InvalidPageToken : public Error {
 public:
  using Error::Error;
};

/// An internal invariant of the decomposer/planner/executor did not hold.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The expression is well-formed but its evaluation is not supported
/// (OPTIONAL and FILTER).
class NotExecutable : public Error {
 public:
  using Error::Error;
};

}  // namespace ldffed
