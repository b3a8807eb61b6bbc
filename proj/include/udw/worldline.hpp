#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "udw/types.hpp"

namespace udw {

/// Timelike trajectory x(t) in flat spacetime, parametrized by lab
/// coordinate time, with the proper-time machinery built on top of it.
/// Immutable after construction; every query is a pure function.
class Worldline {
 public:
  enum class Kind { Rest, Inertial, UniformAcceleration, Tabulated };

  /// State of the detector at a given proper time.
  struct Sample {
    double t = 0.0;
    Vec3d x = Vec3d::Zero();
    Vec3d v = Vec3d::Zero();
    double gamma = 1.0;
  };

  static Worldline rest(double c = 1.0, const Vec3d& position = Vec3d::Zero());
  static Worldline inertial(const Vec3d& velocity, double c = 1.0,
                            const Vec3d& position = Vec3d::Zero());
  /// Hyperbolic motion starting at rest at t = 0:
  /// x(t) = x0 + n (c^2/a) (sqrt(1 + (a t / c)^2) - 1).
  static Worldline uniform_acceleration(double acceleration, const Vec3d& direction,
                                        double c = 1.0, const Vec3d& position = Vec3d::Zero());
  /// Piecewise monotone cubic (PCHIP) interpolation of sampled positions.
  static Worldline tabulated(std::vector<double> times, std::vector<Vec3d> positions,
                             double c = 1.0);

  Kind kind() const { return kind_; }
  double c() const { return c_; }
  std::pair<double, double> domain() const { return {t_lo_, t_hi_}; }
  bool in_domain(double t) const { return t >= t_lo_ && t <= t_hi_; }
  /// Epoch used when none is given: t = 0 if it lies in the domain, else the
  /// start of the domain.
  double default_epoch() const { return in_domain(0.0) ? 0.0 : t_lo_; }

  Vec3d position(double t) const;
  Vec3d velocity(double t) const;
  double lorentz_factor(double t) const;

  /// tau(t) = int_{t0}^{t} dt' / gamma(t'), so proper_time(t0, t0) = 0.
  double proper_time(double t, double t0 = 0.0) const;
  /// Inverse of proper_time at fixed epoch.
  double coordinate_time(double tau, double t0 = 0.0) const;
  Sample at_proper_time(double tau, double t0 = 0.0) const;

  /// Rest or constant velocity.
  bool is_inertial() const { return kind_ == Kind::Rest || kind_ == Kind::Inertial; }
  /// Constant velocity for inertial kinds (zero for Rest).
  Vec3d inertial_velocity() const;
  /// Unit vector along which all motion happens, when there is one. Rest has
  /// none (fully isotropic); tabulated curves report one only if collinear.
  std::optional<Vec3d> motion_axis() const;
  /// Largest proper acceleration magnitude (exact for analytic kinds,
  /// sampled for tabulated ones).
  double max_proper_acceleration() const;

  std::string describe() const;

  // Parameters for the analytic kinds.
  double acceleration() const { return acceleration_; }
  const Vec3d& direction() const { return direction_; }
  const Vec3d& origin() const { return origin_; }

 private:
  Worldline() = default;

  void check_domain(double t) const;
  std::size_t segment(double t) const;
  double tabulated_proper_time_from_start(double t) const;

  Kind kind_ = Kind::Rest;
  double c_ = 1.0;
  double t_lo_ = -std::numeric_limits<double>::infinity();
  double t_hi_ = std::numeric_limits<double>::infinity();
  Vec3d origin_ = Vec3d::Zero();
  Vec3d velocity_ = Vec3d::Zero();
  double acceleration_ = 0.0;
  Vec3d direction_ = Vec3d::UnitX();

  // Tabulated data: knots, positions and PCHIP slopes per knot, and the
  // cumulative proper time at each knot measured from times_.front().
  std::vector<double> times_;
  std::vector<Vec3d> positions_;
  std::vector<Vec3d> slopes_;
  std::vector<double> tau_knots_;
};

Vec3d velocity(const Worldline& w, double t);
double lorentz_factor(const Worldline& w, double t);
double proper_time(const Worldline& w, double t, double t0 = 0.0);
double coordinate_time(const Worldline& w, double tau, double t0 = 0.0);

}  // namespace udw
