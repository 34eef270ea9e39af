#pragma once

#include <stdexcept>
#include <string>

namespace mqrl {

enum class ErrorCode {
  InvalidArgument = 1,
  Configuration = 2,
  State = 3,
  Io = 4,
  Format = 5,
};

// All library failures surface as this exception; the C API maps `code()` onto
// its integer status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace mqrl
