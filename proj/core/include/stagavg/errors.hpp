#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stagavg {

enum class ErrorKind {
  invalid_argument,
  numeric_failure,
  unsupported_mode,
  contract_violation,
  io_error,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every exception thrown by the library. `kind()` drives the CLI
/// exit code mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};

/// A NaN or Inf was produced. Carries the round at which it was detected.
class NumericFailure : public Error {
 public:
  NumericFailure(std::uint64_t round, const std::string& what);
  std::uint64_t round() const noexcept { return round_; }

 private:
  std::uint64_t round_;
};

class UnsupportedMode : public Error {
 public:
  explicit UnsupportedMode(const std::string& what) : Error(ErrorKind::unsupported_mode, what) {}
};

class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what) : Error(ErrorKind::contract_violation, what) {}
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace stagavg
