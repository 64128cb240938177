#pragma once

#include <stdexcept>
#include <string>

namespace deltanls {

/// Argument outside the mathematical domain of an operation (s <= 0 for Gamma, t = 0 for the propagator, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at a point where the object is singular (Green's function at the origin in d = 2, 3).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical procedure failed to reach its tolerance (root solve, quadrature, resolution).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated parameter invariant (sigma <= 0, beta = 0, inadmissible frequency, ...).
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace deltanls
