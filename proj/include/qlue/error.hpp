#pragma once

#include <stdexcept>
#include <string>

namespace qlue {

enum class ErrorCode {
  EmptyInput,
  InvalidData,
  InvalidInput,
  IndexOutOfRange,
  EmptyDomain,
  ContractViolation,
  Config,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::ContractViolation: return "ContractViolation";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace qlue
