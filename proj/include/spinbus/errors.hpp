#pragma once

#include <stdexcept>
#include <string>

namespace spinbus {

// Invalid physical parameters or arguments outside a function's domain.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to reach its accuracy target.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A requested schedule has no solution in the allowed parameter range.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed experiment configuration; message aggregates all problems found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinbus
