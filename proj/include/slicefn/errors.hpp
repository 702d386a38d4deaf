#pragma once

#include <stdexcept>
#include <string>

namespace slicefn {

/// Base of every error raised by the library.
///
/// `input_error()` separates malformed requests (unknown algebra, wrong
/// dimension, bad expression) from numerical failures; the command-line
/// front end maps the two onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, bool input) : std::runtime_error(what), input_(input) {}
  bool input_error() const noexcept { return input_; }

 private:
  bool input_;
};

class UnsupportedAlgebra : public Error {
 public:
  explicit UnsupportedAlgebra(const std::string& name)
      : Error("unsupported algebra: " + name, true) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what, true) {}
};

/// A point lies outside the quadratic cone or outside a function's domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what, true) {}
};

/// Star inverse requested for a function that is not tame, or whose normal
/// function vanishes identically.
class InverseUnavailable : public Error {
 public:
  explicit InverseUnavailable(const std::string& what) : Error(what, true) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what, false) {}
};

}  // namespace slicefn
