#pragma once

#include <stdexcept>
#include <string>

namespace unanimity {

enum class ErrorCode {
  kInvalidArgument,
  kPreconditionViolation,
  kResourceLimit,
  kConflict,
  kNotFound,
  kForbidden,
  kUnavailable,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// that adapters (CLI exit codes, HTTP status) can map it without parsing
/// messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace unanimity
