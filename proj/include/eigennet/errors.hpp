#pragma once

#include <stdexcept>
#include <string>

namespace eigennet {

/// Bad run configuration (shapes, ranges, unknown keys, conflicting modes).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A non-finite value showed up where the contract requires finite arithmetic.
/// `where` names the offending layer or parameter block.
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, std::string where)
      : std::runtime_error(what + " [" + where + "]"), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

private:
  std::string where_;
};

/// The candidate function is numerically zero, so Rayleigh-type quotients
/// are undefined. Training treats this as a skip-and-log event.
class DegenerateFunctionError : public std::runtime_error {
public:
  explicit DegenerateFunctionError(const std::string& what) : std::runtime_error(what) {}
};

/// Training gave up after repeated numeric failures in one epoch.
class AbortedRunError : public std::runtime_error {
public:
  AbortedRunError(const std::string& what, int epoch)
      : std::runtime_error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

private:
  int epoch_;
};

}  // namespace eigennet
