#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace webgeom {

/// Every failure the library reports carries one of these names, so the CLI
/// can map it onto an exit code and print it verbatim.
enum class ErrorCode {
  SyntaxError,
  UnknownVariable,
  NonIntegerExponent,
  ArityError,
  SingularEvaluation,
  SingularMatrix,
  NotAWebAtPoint,
  ChernInconsistency,
  CurvaturePurePartNonzero,
  DistributionUndefined,
  DegenerateFrameChange,
  PreconditionNotMet,
  UnknownScenario,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// Message without the leading error name.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace webgeom
