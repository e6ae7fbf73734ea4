#pragma once

#include <stdexcept>
#include <string>

namespace twomode {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: precondition violation, mismatched dimensions, unsupported case.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public DomainError {
 public:
  DimensionMismatch(int expected, int got)
      : DomainError("dimension mismatch: expected N=" + std::to_string(expected) +
                    ", got N=" + std::to_string(got)) {}
};

// Iterative numerics failed (eigensolver sweeps, optimizer budget).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace twomode
