#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwlab {

/// Argument outside the mathematical domain of an operation (r <= 2M, k <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iteration failed to converge or a field became non-finite.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::size_t step = 0)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Invalid or unknown configuration entry; `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace rwlab
