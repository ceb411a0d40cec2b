#include "stagavg/errors.hpp"

namespace stagavg {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::numeric_failure: return "numeric-failure";
    case ErrorKind::unsupported_mode: return "unsupported-mode";
    case ErrorKind::contract_violation: return "contract-violation";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

NumericFailure::NumericFailure(std::uint64_t round, const std::string& what)
    : Error(ErrorKind::numeric_failure, what + " (round " + std::to_string(round) + ")"),
      round_(round) {}

IoError::IoError(const std::string& path, const std::string& what)
    : Error(ErrorKind::io_error, path + ": " + what), path_(path) {}

}  // namespace stagavg
