#pragma once

#include <stdexcept>
#include <string>

namespace polyguess {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (polynomials, guess expressions, job files, CLI args).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  explicit ParseError(const std::string& what) : Error(what), position_(0) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// An index fell outside the rows a triangle table was built with.  Callers
// must not silently treat this as zero: it signals that the row cap was hit.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Arithmetic that has no exact value (factorial of a negative integer,
// division by zero, zero raised to a negative power).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Semantically invalid input: unknown triangle name, non-integer coefficients
// where integers are required, bad option values, and so on.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace polyguess
