#pragma once

#include <stdexcept>
#include <string>

namespace qsearch {

/// A precondition on a numeric argument does not hold (sizes, ranges, regimes).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a function (negative frequency, pole, ...).
class DomainError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// A structural contract was violated by the caller (e.g. non-Hermitian input).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A computation failed numerically (step-size underflow, no convergence, no estimate).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bath / coupling combination violates a hard validity bound of the master equation.
class ValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment configuration does not match the schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsearch
