#pragma once

#include <stdexcept>
#include <string>

namespace decisive {

// Stable error codes. The numeric values are part of the C API and must not
// be renumbered.
enum class ErrorCode : int {
  SyntaxError = 1,
  ValidationError = 2,
  InvalidArgument = 3,
  Unsupported = 4,
  ResourceExhausted = 5,
  MalformedState = 6,
  Io = 7,
  SingularSystem = 8,
  LimitExceeded = 9,
  Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

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

}  // namespace decisive
