#pragma once

#include <functional>
#include <memory>
#include <string>

#include "udw/detector.hpp"
#include "udw/profiles.hpp"
#include "udw/types.hpp"
#include "udw/worldline.hpp"

namespace udw {

/// Invertible map between comoving coordinates (tau, xi) and lab
/// coordinates (t, x). Events are stored time-first.
class FrameMap {
 public:
  enum class Kind { Identity, Boost, WorldlineComoving };

  static FrameMap identity(double c = 1.0);
  /// Inertial frame moving with velocity v whose spatial origin passes
  /// through the lab origin at t = 0.
  static FrameMap boost(const Vec3d& v, double c = 1.0);
  /// Rigid comoving frame of an arbitrary worldline: the point xi sits at
  /// z(tau) + Lambda(v(tau)) xi on the simultaneity slice of tau. For
  /// hyperbolic motion this is exactly the Rindler chart. `radius` is the
  /// largest |xi| the map will be used on; radius * a / c^2 must stay
  /// below 0.1.
  static FrameMap comoving(const Worldline& w, double radius);

  Kind kind() const { return kind_; }
  double c() const { return c_; }
  /// Velocity of a Boost map (zero otherwise).
  const Vec3d& velocity() const { return velocity_; }
  /// Worldline of the spatial origin xi = 0.
  const Worldline& worldline() const { return *worldline_; }
  double radius() const { return radius_; }

  /// (tau, xi) -> (t, x).
  Event4d forward(const Event4d& detector_event) const;
  /// (t, x) -> (tau, xi).
  Event4d inverse(const Event4d& lab_event) const;
  /// |d(tau, xi)/d(t, x)| at a lab event; analytic except for tabulated
  /// worldlines, which fall back to central differences.
  double jacobian(const Event4d& lab_event) const;
  /// Central-difference determinant of the inverse map, independent of the
  /// analytic expressions.
  double jacobian_numeric(const Event4d& lab_event, double step = 1e-5) const;

  std::string describe() const;

 private:
  FrameMap() = default;

  Event4d comoving_inverse(const Event4d& lab_event) const;

  Kind kind_ = Kind::Identity;
  double c_ = 1.0;
  Vec3d velocity_ = Vec3d::Zero();
  double radius_ = 0.0;
  std::shared_ptr<const Worldline> worldline_;
};

FrameMap boost_map(const Vec3d& v, double c = 1.0);
double jacobian_det(const FrameMap& m, const Event4d& lab_event);

/// Which chart a density is written in; its time coordinate is the
/// parameter the Hamiltonian generates translations in.
enum class Chart { Detector, Lab };
/// Which time the switching function is a function of.
enum class SwitchingFrame { Detector, Lab };

/// c-number structure of an interaction Hamiltonian density
/// c lambda chi f * mu(monopole_time) * phi(field_event), written in one chart.
///
/// For a pointlike detector the density is a line density: coefficient()
/// and the other accessors only read the time component of the event and
/// return the coefficient of the Hamiltonian itself.
class HamiltonianDensity {
 public:
  using Scalar = std::function<double(const Event4d&)>;
  using EventMap = std::function<Event4d(const Event4d&)>;

  Chart chart() const { return chart_; }
  SwitchingFrame switching_frame() const { return switching_frame_; }
  bool is_pointlike() const { return pointlike_; }
  int dimension() const { return dimension_; }
  const DetectorSpec& detector() const { return detector_; }
  /// Map between the charts (shared by both representations).
  const FrameMap& map() const { return *map_; }

  double coefficient(const Event4d& e) const { return coefficient_(e); }
  /// Proper time entering the monopole phase exp(+-i Omega tau).
  double monopole_time(const Event4d& e) const { return monopole_time_(e); }
  /// Lab event at which the field operator is evaluated.
  Event4d field_event(const Event4d& e) const { return field_event_(e); }

  /// Shorthands for pointlike densities parametrized by a time s.
  double coefficient(double s) const;
  double monopole_time(double s) const;
  Event4d field_event(double s) const;

  std::string describe() const;

 private:
  friend HamiltonianDensity detector_density(const DetectorSpec&, const SwitchingProfile&,
                                             const SmearingProfile&, const FrameMap&, int);
  friend HamiltonianDensity lab_switched_density(const DetectorSpec&, const SwitchingProfile&,
                                                 const SmearingProfile&, const FrameMap&, int);
  friend HamiltonianDensity transform_density(const HamiltonianDensity&, const FrameMap&);
  friend HamiltonianDensity reparametrize_hamiltonian(const HamiltonianDensity&, const Worldline&);

  HamiltonianDensity() = default;

  Chart chart_ = Chart::Detector;
  SwitchingFrame switching_frame_ = SwitchingFrame::Detector;
  bool pointlike_ = true;
  int dimension_ = 3;
  DetectorSpec detector_;
  std::shared_ptr<const FrameMap> map_;
  Scalar coefficient_;
  Scalar monopole_time_;
  EventMap field_event_;
};

/// Density in the comoving chart with switching in proper time:
/// c lambda chi(tau) f(xi). The map fixes where the field is sampled.
HamiltonianDensity detector_density(const DetectorSpec& detector, const SwitchingProfile& chi,
                                    const SmearingProfile& f, const FrameMap& m, int dimension);

/// Density whose switching is controlled in lab time, written in the lab
/// chart: c lambda chi(t) f(xi(t, x)) |d(tau, xi)/d(t, x)|. For a
/// pointlike detector this collapses to c lambda chi(t) / gamma(t).
HamiltonianDensity lab_switched_density(const DetectorSpec& detector, const SwitchingProfile& chi_lab,
                                        const SmearingProfile& f, const FrameMap& m, int dimension);

/// Rewrites a density in the other chart of `m`, multiplying by the
/// Jacobian (or the redshift factor for pointlike densities), so that the
/// spacetime integral of every coefficient is unchanged. Applying it twice
/// returns the original coefficients.
HamiltonianDensity transform_density(const HamiltonianDensity& h, const FrameMap& m);

/// Pointlike Hamiltonian generating proper-time translations rewritten to
/// generate lab-time translations along `w`: H_t(t) = gamma(t)^-1 H_tau(tau(t)).
HamiltonianDensity reparametrize_hamiltonian(const HamiltonianDensity& h, const Worldline& w);

}  // namespace udw
