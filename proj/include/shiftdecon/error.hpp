#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shiftdecon {

enum class ErrorCode {
  invalid_parameter,
  aliasing,
  invariant_violation,
  division_by_zero,
  degenerate_input,
  insufficient_points,
  invalid_config,
  io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code is what the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace shiftdecon
