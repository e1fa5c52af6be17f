#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace porogrowth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid mesh or domain data (nonpositive length, too few nodes).
class InvalidDomain : public Error {
public:
  using Error::Error;
};

/// Initial-condition amplitudes that would leave no room for the fluid phase.
class InvalidInitialCondition : public Error {
public:
  using Error::Error;
};

/// Invalid parameter set or scenario.
class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// phi_fl left the open interval (0, 1) at some node.
class ClosureViolation : public Error {
public:
  using Error::Error;
};

/// A closure was evaluated outside of its domain of definition.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Linear system is numerically singular.
class SingularSystem : public Error {
public:
  using Error::Error;
};

/// An intermediate or final state violates positivity or closure invariants.
class NonphysicalState : public Error {
public:
  using Error::Error;
};

/// Malformed transport problem (e.g. nonpositive diffusion).
class InvalidProblem : public Error {
public:
  using Error::Error;
};

/// File output failure; the message names the path.
class IoError : public Error {
public:
  using Error::Error;
};

/// Configuration parse or validation failure. Line is 0 when the error
/// is not attached to a particular line of input.
class ConfigError : public Error {
public:
  ConfigError(std::size_t line, std::string key, const std::string& what)
      : Error(format(line, key, what)), line_(line), key_(std::move(key)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

private:
  static std::string format(std::size_t line, const std::string& key,
                            const std::string& what) {
    std::string msg = "config error";
    if (line > 0) msg += " at line " + std::to_string(line);
    if (!key.empty()) msg += " (key '" + key + "')";
    return msg + ": " + what;
  }

  std::size_t line_;
  std::string key_;
};

} // namespace porogrowth
