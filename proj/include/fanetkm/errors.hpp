#pragma once

#include <stdexcept>
#include <string>

namespace fanetkm {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The receiver threshold cannot be met at any finite positive distance.
class NoCoverageError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A key record that is expired or fails signature verification.
class RejectedInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ConfigErrorKind {
  MissingFile,
  MalformedSyntax,
  UnknownField,
  InvalidValue,
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}
  explicit ConfigError(const std::string& what)
      : ConfigError(ConfigErrorKind::InvalidValue, what) {}

  ConfigErrorKind kind() const noexcept { return kind_; }

 private:
  ConfigErrorKind kind_;
};

/// Scenario with zero nodes.
class EmptyScenarioError : public ConfigError {
 public:
  explicit EmptyScenarioError(const std::string& what) : ConfigError(what) {}
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fanetkm
