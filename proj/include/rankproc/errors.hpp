#pragma once

#include <stdexcept>
#include <string>

namespace rankproc {

/// Base of every error thrown by the library. `code()` is a stable,
/// machine-readable identifier that the CLI forwards to its callers.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Malformed arguments or data that violate a documented precondition.
class InputError : public Error {
 public:
  explicit InputError(const std::string& message) : Error("INPUT_INVALID", message) {}
};

/// Requested size exceeds a fixed capacity limit.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& message) : Error("CAPACITY_EXCEEDED", message) {}
};

/// Exact analysis requested on a spec that carries sampler-only laws.
class UnsupportedSpecError : public Error {
 public:
  explicit UnsupportedSpecError(const std::string& message)
      : Error("UNSUPPORTED_SPEC", message) {}
};

/// Statistic undefined for the data (e.g. zero variance).
class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& message) : Error("DEGENERATE", message) {}
};

/// Problems with configuration files: missing, unparsable, or wrong schema.
class ConfigError : public Error {
 public:
  ConfigError(std::string code, const std::string& message) : Error(std::move(code), message) {}
};

}  // namespace rankproc
