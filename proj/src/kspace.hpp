#pragma once

// Momentum-space integration of a nonnegative mode function F(k) against the
// massless measure d^d k / (2 (2 pi)^d |k|), with analytic angular reduction
// where the problem has a symmetry axis.

#include <functional>

#include "udw/types.hpp"

namespace udw::detail {

enum class Symmetry { Isotropic, Axial, None };

struct KSpaceProblem {
  int dimension = 3;
  Symmetry symmetry = Symmetry::Isotropic;
  /// Unit symmetry axis, lying in the first `dimension` coordinates.
  Vec3d axis = Vec3d::UnitX();
  /// Lower radial limit (the infrared cutoff; 0 when not needed).
  double k_min = 0.0;
  /// Width of the first radial chunk; chunks double from there.
  double k_scale = 1.0;
  /// Radius beyond which the integrand is known to decay; truncation is only
  /// considered past this point.
  double k_decay = 1.0;
  double rel_tol = 1e-9;
  /// Absolute noise level of F (from inexact amplitudes); angular integrals
  /// stop refining below it.
  double integrand_floor = 0.0;
  /// Upper bound of F, or 0 when none is known.
  double integrand_bound = 0.0;
  int max_chunks = 48;
};

struct KSpaceResult {
  double value = 0.0;
  double abs_error = 0.0;
  long integrand_calls = 0;
  double k_max = 0.0;
};

/// F(k, abs) returns the mode function at k; `abs` is the absolute accuracy
/// that suffices there.
using ModeFunction = std::function<double(const Vec3d&, double)>;

KSpaceResult integrate_kspace(const ModeFunction& F, const KSpaceProblem& p);

/// Unit vector orthogonal to `axis` inside the first `dimension` coordinates.
Vec3d orthogonal_in_plane(const Vec3d& axis, int dimension);

}  // namespace udw::detail
