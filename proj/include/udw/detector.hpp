#pragma once

#include <optional>
#include <string>

namespace udw {

/// Two-level detector parameters. gap > 0 is excitation from the ground
/// state; a negative gap gives the emission counterpart.
struct DetectorSpec {
  double gap = 1.0;
  double coupling = 1.0;

  void validate() const;
};

/// Free scalar field in `dimension` spatial dimensions with dispersion
/// omega_k = sqrt(c^2 k^2 + m^2 c^4). Response formulas require m = 0.
struct FieldSpec {
  int dimension = 3;
  double mass = 0.0;
  double c = 1.0;
  /// Lower wavenumber limit; mandatory in one spatial dimension.
  std::optional<double> ir_cutoff;

  void validate() const;
  double frequency(double k_norm) const;
};

}  // namespace udw
