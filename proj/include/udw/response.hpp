#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "udw/detector.hpp"
#include "udw/frames.hpp"
#include "udw/profiles.hpp"
#include "udw/types.hpp"
#include "udw/worldline.hpp"

namespace udw {

/// Ways of evaluating the leading-order transition probability.
enum class Route {
  DetectorFrame,    // proper-time integral along the worldline
  LabFrame,         // lab-time integral with the redshift factor
  InertialClosed,   // switching transform at the Doppler-shifted gap
  SmearedInertial,  // closed form with the smearing transform at k-tilde
  Density,          // spacetime integral over the comoving frame (smeared, any motion)
};

const char* to_string(Route r);
std::optional<Route> route_from_string(std::string_view name);

struct Scenario {
  std::string id = "scenario";
  DetectorSpec detector;
  FieldSpec field;
  Worldline worldline = Worldline::rest();
  SwitchingProfile switching = SwitchingProfile::gaussian(1.0);
  SmearingProfile smearing = SmearingProfile::pointlike();
  SwitchingFrame switching_frame = SwitchingFrame::Detector;

  /// Checks field, detector and the consistency of c and the dimension with
  /// the worldline. Throws Error.
  void validate() const;
};

struct ResponseOptions {
  double rel_tol = 1e-9;
  /// Use the k-tilde expression with the opposite sign of the |k| v / c term
  /// (not null); only the smeared routes are affected.
  bool use_printed_ktilde = false;
};

/// Boosted null wave covector (k0, k) of a massless mode, in wavenumber units.
struct NullCovector {
  double k0 = 0.0;
  Vec3d k = Vec3d::Zero();

  /// c^2 k0^2 - c^2 |k|^2.
  double interval(double c) const { return c * c * (k0 * k0 - k.squaredNorm()); }
};

struct ProbabilityResult {
  double value = 0.0;
  double abs_error = 0.0;
  Route route = Route::DetectorFrame;
  double gap = 0.0;
  std::string worldline;
  long amplitude_evaluations = 0;
  /// Set when the value is more negative than its own error estimate.
  bool flagged_negative = false;
};

/// exp(-i [c |k| dt - k . dx]) / (2 (2 pi)^d |k|), the plane-wave integrand of
/// the vacuum Wightman function.
Complex wightman_momentum_kernel(const FieldSpec& field, const Vec3d& k, const Event4d& delta);

/// k0 = gamma (-|k| + k.v / c), k_par = gamma (k_par - |k| |v| / c), k_perp
/// unchanged. `printed` selects gamma (|k| v / c + k_par v_hat) + k_perp for
/// the spatial part instead.
NullCovector ktilde(const Vec3d& v, const Vec3d& k, double c = 1.0, bool printed = false);

ProbabilityResult probability_detector_frame(const Scenario& s, const ResponseOptions& o = {});
ProbabilityResult probability_lab_frame(const Scenario& s, const ResponseOptions& o = {});
ProbabilityResult probability_inertial_closed(const Scenario& s, const ResponseOptions& o = {});
ProbabilityResult probability_smeared_inertial(const Scenario& s, const ResponseOptions& o = {});
ProbabilityResult probability_density(const Scenario& s, const ResponseOptions& o = {});

ProbabilityResult probability(const Scenario& s, Route route, const ResponseOptions& o = {});
/// Same route with the gap negated.
ProbabilityResult emission_probability(const Scenario& s, Route route, const ResponseOptions& o = {});

/// First-order transition amplitude for a single pointlike mode k, without
/// the c lambda / sqrt(2 (2 pi)^d |k|) prefactor:
/// int dtau chi exp(i [Omega tau + c |k| t(tau) - k . x(tau)]).
Complex mode_amplitude(const Scenario& s, const Vec3d& k, Route route, const ResponseOptions& o = {});

}  // namespace udw
