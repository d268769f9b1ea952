#pragma once

#include <stdexcept>
#include <string>

namespace skillmatch {

/// Raised for invalid user-supplied configuration. `key()` names the
/// offending setting when one is known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message, std::string key = {})
      : std::runtime_error(message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Raised when a caller breaks an operation's precondition (dimension
/// mismatch, malformed matrix, unknown worker id and so on).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace skillmatch
