#pragma once

#include <stdexcept>
#include <string>

namespace berry_ring {

enum class ErrorCode {
  invalid_argument = 1,
  contract_violation,
  singular_matrix,
  domain,
  degeneracy,
  singularity,
  search,
  analysis,
  numerical,
  config,
  io,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the C
// API maps them onto status values and the CLI onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

void require_finite(double value, const char* what);

}  // namespace berry_ring
