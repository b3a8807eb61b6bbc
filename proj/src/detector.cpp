#include "udw/detector.hpp"

#include <cmath>

#include "udw/types.hpp"

namespace udw {

void DetectorSpec::validate() const {
  if (!std::isfinite(gap)) throw Error(ErrorKind::InvalidArgument, "gap must be finite");
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
    throw Error(ErrorKind::InvalidArgument, "coupling must be finite and >= 0");
  }
}

void FieldSpec::validate() const {
  if (dimension < 1 || dimension > 3) {
    throw Error(ErrorKind::InvalidArgument, "field dimension must be 1, 2 or 3");
  }
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::InvalidArgument, "c must be positive");
  if (!(mass >= 0.0)) throw Error(ErrorKind::InvalidArgument, "mass must be >= 0");
  if (ir_cutoff && !(*ir_cutoff > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "ir_cutoff must be positive");
  }
  if (dimension == 1 && !ir_cutoff) {
    throw Error(ErrorKind::IRDivergence,
                "d = 1 response is infrared divergent; an explicit ir_cutoff is required");
  }
}

double FieldSpec::frequency(double k) const {
  return std::sqrt(c * c * k * k + mass * mass * c * c * c * c);
}

}  // namespace udw
