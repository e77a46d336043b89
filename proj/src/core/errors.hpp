#pragma once

#include <stdexcept>
#include <string>

namespace nlk {

// Mirrors nlk_status in the C header; values must stay in sync.
enum class ErrorCode {
  invalid_argument = 1,
  singular_input = 2,
  not_converged = 3,
  precondition = 4,
  io = 5,
  internal = 6,
};

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

}  // namespace nlk
