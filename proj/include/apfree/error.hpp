#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apfree {

enum class ErrorCode {
  invalid_parameter,
  invalid_input,
  invalid_range,
  malformed_certificate,
  precondition_violation,
  infeasible,
  window_exhausted,
  budget_exceeded,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace apfree
