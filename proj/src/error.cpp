#include "webgeom/error.hpp"

namespace webgeom {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::NonIntegerExponent: return "NonIntegerExponent";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::SingularEvaluation: return "SingularEvaluation";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotAWebAtPoint: return "NotAWebAtPoint";
    case ErrorCode::ChernInconsistency: return "ChernInconsistency";
    case ErrorCode::CurvaturePurePartNonzero: return "CurvaturePurePartNonzero";
    case ErrorCode::DistributionUndefined: return "DistributionUndefined";
    case ErrorCode::DegenerateFrameChange: return "DegenerateFrameChange";
    case ErrorCode::PreconditionNotMet: return "PreconditionNotMet";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace webgeom
