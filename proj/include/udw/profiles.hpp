#pragma once

#include <string>
#include <utility>
#include <vector>

#include "udw/types.hpp"

namespace udw {

/// Switching function chi(tau) >= 0 with peak value 1. Fourier transforms use
/// the +i convention: chi_bar(w) = int dtau chi(tau) exp(+i w tau).
class SwitchingProfile {
 public:
  enum class Kind { Gaussian, CosineRamp, CompactBump };

  /// exp(-(tau - center)^2 / (2 width^2)).
  static SwitchingProfile gaussian(double width, double center = 0.0);
  /// Flat top of length `plateau` with cos^2 ramps of length `ramp` on both
  /// sides, centred on `center`. C^1 with a transform decaying as w^-3.
  static SwitchingProfile cosine_ramp(double plateau, double ramp, double center = 0.0);
  /// Smooth bump exp(1 - 1/(1 - u^2)) on [start, end], u mapped to (-1, 1).
  /// C-infinity, vanishes identically outside the support.
  static SwitchingProfile compact_bump(double start, double end);

  Kind kind() const { return kind_; }
  double value(double tau) const;
  double operator()(double tau) const { return value(tau); }

  /// Closed form where one exists (Gaussian, cosine ramp), quadrature otherwise.
  Complex fourier(double omega) const;
  /// Always by oscillatory quadrature; used to cross-check closed forms.
  Complex fourier_numeric(double omega, double rel_tol = 1e-12) const;
  bool has_closed_form_transform() const { return kind_ != Kind::CompactBump; }

  /// Interval outside which chi < threshold * peak (exact for compact kinds).
  std::pair<double, double> support(double threshold = 1e-16) const;
  /// Points where chi is not smooth (ramp joins); useful quadrature breakpoints.
  std::vector<double> kinks() const;
  /// Frequency scale beyond which |chi_bar| has decayed to negligible levels
  /// (exact bound for the Gaussian, a starting guess for the others).
  double bandwidth() const;
  /// int chi dtau.
  double area() const;

  double width() const { return p1_; }
  double center() const { return center_; }
  std::string describe() const;

  // Raw parameters: Gaussian (width, -), CosineRamp (plateau, ramp),
  // CompactBump (start, end).
  double first_parameter() const { return p1_; }
  double second_parameter() const { return p2_; }

 private:
  SwitchingProfile(Kind kind, double p1, double p2, double center)
      : kind_(kind), p1_(p1), p2_(p2), center_(center) {}

  Kind kind_;
  double p1_;
  double p2_;
  double center_;
};

/// Spatial smearing f(xi) normalized to int f = 1. Every kind is isotropic
/// and even, so its transform is real. Pointlike is the delta distribution
/// and is only ever handled symbolically.
class SmearingProfile {
 public:
  enum class Kind { Pointlike, GaussianBall, ExponentialAtomLike };

  static SmearingProfile pointlike();
  /// (2 pi eps^2)^(-n/2) exp(-|xi|^2 / (2 eps^2)).
  static SmearingProfile gaussian_ball(double width);
  /// exp(-|xi| / a0), normalized in n dimensions.
  static SmearingProfile exponential(double scale);

  Kind kind() const { return kind_; }
  bool is_pointlike() const { return kind_ == Kind::Pointlike; }
  /// Width (GaussianBall) or decay length (ExponentialAtomLike); 0 for a point.
  double length_scale() const { return scale_; }

  double density(const Vec3d& xi, int n) const;
  /// f_bar(q) = int d^n xi f(xi) exp(i q.xi) for |q| = q_norm.
  double fourier_radial(double q_norm, int n) const;
  /// Partial transform over the n-1 directions orthogonal to a fixed axis:
  /// int d^(n-1) xi_perp f(xi_par, xi_perp) exp(-i k_perp . xi_perp).
  double transverse_transform(double xi_par, double k_perp, int n) const;
  /// Radius beyond which f (or its transverse slice) is negligible.
  double support_radius() const;
  /// Wavenumber scale beyond which |f_bar| is negligible (Gaussian: 12/eps).
  double bandwidth() const;
  std::string describe() const;

 private:
  SmearingProfile(Kind kind, double scale) : kind_(kind), scale_(scale) {}

  Kind kind_;
  double scale_;
};

double switching_eval(const SwitchingProfile& chi, double tau);
Complex switching_fourier(const SwitchingProfile& chi, double omega);
/// q is an n-vector stored in the leading components of a Vec3d.
Complex smearing_fourier(const SmearingProfile& f, const Vec3d& q, int n);

}  // namespace udw
