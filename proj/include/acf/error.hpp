#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acf {

// Base of every library error. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed text. `position` is a byte offset into the input.
class ParseError : public Error {
public:
  ParseError(std::size_t position, const std::string& what)
      : Error("at " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

// Symbol missing from a signature, arity mismatch, non-ring symbol, etc.
class SymbolError : public Error {
public:
  using Error::Error;
};

// A precondition of an operation was violated by its arguments.
class DomainError : public Error {
public:
  using Error::Error;
};

// A computation exceeded its configured work budget.
class ResourceError : public Error {
public:
  using Error::Error;
};

// An independent oracle disagreed with the decision procedure.
class InternalError : public Error {
public:
  using Error::Error;
};

} // namespace acf
