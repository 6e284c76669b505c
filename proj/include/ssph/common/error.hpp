#pragma once

#include <stdexcept>
#include <string>

namespace ssph {

/// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure during a solve: CFL violation, non-finite state,
/// singular systems (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the CFL guard before a step is taken.
class CflViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Caller broke an operation precondition (mismatched sizes and the like).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite or otherwise unusable input values.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A requested basis or tensor would exceed the configured size cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace ssph
