#pragma once

#include <stdexcept>
#include <string>

namespace cvreal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad space dimension or mismatched operand sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// A state does not fit inside the finite grid window.
class LeakageError : public Error {
 public:
  using Error::Error;
};

// Matrix is not a valid density matrix (Hermiticity, trace, positivity).
class StateError : public Error {
 public:
  using Error::Error;
};

// Closed form used outside its range of applicability.
class ValidityError : public Error {
 public:
  using Error::Error;
};

// Time-dependent propagation pushed mass against the grid boundary.
class WindowError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved_error() const { return achieved_; }

 private:
  double achieved_;
};

}  // namespace cvreal
