#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracburgers {

/// Argument outside the mathematical domain of an operation (x beyond the
/// ghost margin, lambda outside (0,1), a window smaller than one cell, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two objects that must agree (grids, kernels) do not.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, failed factorizations and similar fatal conditions.
/// Carries an optional snapshot of the offending state for post-mortem dumps.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::vector<double> snapshot = {})
      : std::runtime_error(what), snapshot_(std::move(snapshot)) {}

  const std::vector<double>& snapshot() const noexcept { return snapshot_; }

 private:
  std::vector<double> snapshot_;
};

}  // namespace fracburgers
