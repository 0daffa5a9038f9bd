#pragma once

#include <stdexcept>
#include <string>

namespace nlpa {

enum class ErrorCode {
  NonHyperbolicMatrix,
  DifferentSurfaces,
  OutOfAtlas,
  TooFarFromCone,
  SingularHit,
  PowerSearchExceeded,
  InvalidParameter,
  RootBracketFailure,
  ToleranceNotMet,
  AtConePoint,
  NoRootInRange,
  CoverFailure,
  SeriesDivergence,
  ConeCapture,
  StepUnderflow,
  Captured,
  NoReturnWithinBudget,
  NonMonotoneBranch,
  ConnectionDetected,
  MarginExhausted,
  DepthExceedsAgreement,
  SingularOrbit,
  MissingPresetData,
  DegenerateSegment,
  Io,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nlpa
