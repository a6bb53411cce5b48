#include "berry_ring/error.hpp"

#include <cmath>

namespace berry_ring {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::contract_violation: return "contract violation";
    case ErrorCode::singular_matrix: return "singular matrix";
    case ErrorCode::domain: return "domain error";
    case ErrorCode::degeneracy: return "degeneracy";
    case ErrorCode::singularity: return "singularity";
    case ErrorCode::search: return "search failure";
    case ErrorCode::analysis: return "analysis failure";
    case ErrorCode::numerical: return "numerical error";
    case ErrorCode::config: return "configuration error";
    case ErrorCode::io: return "I/O error";
  }
  return "unknown error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) fail(ErrorCode::invalid_argument, std::string(what) + " must be finite");
}

}  // namespace berry_ring
