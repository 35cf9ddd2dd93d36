#pragma once

#include <stdexcept>
#include <string>

namespace qrl {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation (e.g. partial trace of a 2x2).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input lies outside the domain of the operation: tetrahedron ordering,
/// t outside [0, 1], epsilon outside (0, 1), non-Hermitian operand, ...
class DomainError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf produced during evaluation, or a required optimization failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrl
