#pragma once

#include <stdexcept>

namespace thermoqfi {

// Invalid arguments: bad dimensions, index sets, non-positive temperatures.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A function evaluated outside its domain (log of a zero eigenvalue, non-PSD input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Ill-conditioned numerics, e.g. a series fit whose design matrix is near singular.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that would exceed the supported problem size.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An extrapolation or convergence diagnostic failed.
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thermoqfi
