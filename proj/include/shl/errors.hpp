#pragma once

#include <stdexcept>
#include <string>

namespace shl {

/// Base class for all errors raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI to build error JSON.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

/// Invalid user input: bad config values, malformed JSON, unknown keys.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

/// A stated precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& msg) : Error("precondition", msg) {}
};

/// Potential evaluated on its singular set.
class SingularityError : public Error {
public:
  explicit SingularityError(const std::string& msg) : Error("singularity", msg) {}
};

/// Operation requested on a gauge the solvers do not support.
class UnsupportedDomainError : public Error {
public:
  explicit UnsupportedDomainError(const std::string& msg) : Error("unsupported-domain", msg) {}
};

/// Numerical failure (non-convergence, loss of positive definiteness, overflow).
class NumericError : public Error {
public:
  explicit NumericError(const std::string& msg) : Error("numeric", msg) {}
};

} // namespace shl
