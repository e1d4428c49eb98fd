#pragma once

#include <stdexcept>
#include <string>

namespace bits {

// Bad caller-supplied values (dimensions, ranges, missing data).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Hyperparameters or arguments outside their mathematical domain.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Unsupported configuration choices (e.g. a Matern nu without a closed form).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures of the numerics themselves (factorization, bracketing, convergence).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bits
