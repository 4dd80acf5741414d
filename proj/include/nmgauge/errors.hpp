#pragma once

#include <stdexcept>
#include <string>

namespace nmgauge {

// A size guard tripped (spins, bonds, quadrature nodes).
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model or experiment configuration. key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nmgauge
