#pragma once

#include <stdexcept>
#include <string>

namespace spinchain {

// Base of every error thrown by the library. The C API maps each subclass
// onto its own status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain (bad mask, spin index, length...).
class InputError : public Error {
 public:
  using Error::Error;
};

// Parameters leave the regime where a model or estimate is meaningful.
class ValidityError : public Error {
 public:
  ValidityError(const std::string& what, double offending_value)
      : Error(what), value_(offending_value) {}
  double offending_value() const noexcept { return value_; }

 private:
  double value_;
};

// Iterative propagation could not reach the requested accuracy.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved_residual() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Non-finite values appeared in a computation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A state violates a structural invariant (e.g. normalization).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A perturbative energy denominator vanished.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinchain
