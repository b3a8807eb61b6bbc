#include "udw/types.hpp"

namespace udw {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::SuperluminalTrajectory: return "SuperluminalTrajectory";
    case ErrorKind::SuperluminalBoost: return "SuperluminalBoost";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::InversionFailure: return "InversionFailure";
    case ErrorKind::NotPointlike: return "NotPointlike";
    case ErrorKind::MapNotInvertibleOnSupport: return "MapNotInvertibleOnSupport";
    case ErrorKind::ZeroMode: return "ZeroMode";
    case ErrorKind::IRDivergence: return "IRDivergence";
    case ErrorKind::StepTooCoarse: return "StepTooCoarse";
    case ErrorKind::FitFailure: return "FitFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace udw
