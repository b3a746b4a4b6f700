#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qalab {

/// Thrown when a caller violates a documented precondition (bad argument,
/// dimension mismatch, non-Hermitian input, unnormalized state).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical routine cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration produced NaN/Inf amplitudes.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : NumericalError(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace qalab
