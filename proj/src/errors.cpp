#include "nlpa/errors.hpp"

namespace nlpa {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonHyperbolicMatrix: return "NonHyperbolicMatrix";
    case ErrorCode::DifferentSurfaces: return "DifferentSurfaces";
    case ErrorCode::OutOfAtlas: return "OutOfAtlas";
    case ErrorCode::TooFarFromCone: return "TooFarFromCone";
    case ErrorCode::SingularHit: return "SingularHit";
    case ErrorCode::PowerSearchExceeded: return "PowerSearchExceeded";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::RootBracketFailure: return "RootBracketFailure";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::AtConePoint: return "AtConePoint";
    case ErrorCode::NoRootInRange: return "NoRootInRange";
    case ErrorCode::CoverFailure: return "CoverFailure";
    case ErrorCode::SeriesDivergence: return "SeriesDivergence";
    case ErrorCode::ConeCapture: return "ConeCapture";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::Captured: return "Captured";
    case ErrorCode::NoReturnWithinBudget: return "NoReturnWithinBudget";
    case ErrorCode::NonMonotoneBranch: return "NonMonotoneBranch";
    case ErrorCode::ConnectionDetected: return "ConnectionDetected";
    case ErrorCode::MarginExhausted: return "MarginExhausted";
    case ErrorCode::DepthExceedsAgreement: return "DepthExceedsAgreement";
    case ErrorCode::SingularOrbit: return "SingularOrbit";
    case ErrorCode::MissingPresetData: return "MissingPresetData";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace nlpa
