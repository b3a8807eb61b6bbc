#include "udw/worldline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "udw/kinematics.hpp"
#include "udw/quadrature.hpp"

namespace udw {
namespace {

void require_timelike(const Vec3d& v, double c, ErrorKind kind) {
  if (!(v.norm() < c)) {
    std::ostringstream os;
    os << "speed must satisfy |v| < c (|v| = " << v.norm() << ", c = " << c << ")";
    throw Error(kind, os.str());
  }
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

// Monotone cubic slopes (Fritsch-Carlson): centred three-point estimates,
// limited on every interval where the data is monotone so no overshoot is
// introduced. Across a local extremum the centred slope is kept.
std::vector<double> pchip_slopes(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = t[k + 1] - t[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    d[k] = (h[k] * delta[k - 1] + h[k - 1] * delta[k]) / (h[k - 1] + h[k]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign(s) != sign(d0)) {
      s = 0.0;
    } else if (sign(d0) != sign(d1) && std::abs(s) > std::abs(3.0 * d0)) {
      s = 3.0 * d0;
    }
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (delta[k] == 0.0) {
      d[k] = d[k + 1] = 0.0;
      continue;
    }
    const bool left_monotone = k == 0 || delta[k - 1] * delta[k] > 0.0;
    const bool right_monotone = k + 2 == n || delta[k + 1] * delta[k] > 0.0;
    if (!left_monotone || !right_monotone) continue;
    const double alpha = d[k] / delta[k];
    const double beta = d[k + 1] / delta[k];
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      d[k] = tau * alpha * delta[k];
      d[k + 1] = tau * beta * delta[k];
    }
  }
  return d;
}

struct Hermite {
  double h00, h10, h01, h11;
};

Hermite basis(double s) {
  const double s2 = s * s, s3 = s2 * s;
  return {2 * s3 - 3 * s2 + 1, s3 - 2 * s2 + s, -2 * s3 + 3 * s2, s3 - s2};
}

Hermite basis_prime(double s) {
  const double s2 = s * s;
  return {6 * s2 - 6 * s, 3 * s2 - 4 * s + 1, -6 * s2 + 6 * s, 3 * s2 - 2 * s};
}

Hermite basis_second(double s) { return {12 * s - 6, 6 * s - 4, -12 * s + 6, 6 * s - 2}; }

}  // namespace

Worldline Worldline::rest(double c, const Vec3d& position) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "speed of light must be positive");
  Worldline w;
  w.kind_ = Kind::Rest;
  w.c_ = c;
  w.origin_ = position;
  return w;
}

Worldline Worldline::inertial(const Vec3d& velocity, double c, const Vec3d& position) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "speed of light must be positive");
  require_timelike(velocity, c, ErrorKind::SuperluminalTrajectory);
  Worldline w;
  w.kind_ = velocity.isZero(0.0) ? Kind::Rest : Kind::Inertial;
  w.c_ = c;
  w.origin_ = position;
  w.velocity_ = velocity;
  if (w.kind_ == Kind::Inertial) w.direction_ = velocity.normalized();
  return w;
}

Worldline Worldline::uniform_acceleration(double acceleration, const Vec3d& direction, double c,
                                          const Vec3d& position) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "speed of light must be positive");
  if (!(acceleration > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "proper acceleration must be positive");
  }
  if (!(direction.norm() > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "acceleration direction must be nonzero");
  }
  Worldline w;
  w.kind_ = Kind::UniformAcceleration;
  w.c_ = c;
  w.origin_ = position;
  w.acceleration_ = acceleration;
  w.direction_ = direction.normalized();
  return w;
}

Worldline Worldline::tabulated(std::vector<double> times, std::vector<Vec3d> positions, double c) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "speed of light must be positive");
  if (times.size() != positions.size() || times.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "tabulated worldline needs >= 2 matching samples");
  }
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (!(times[i + 1] > times[i])) {
      throw Error(ErrorKind::InvalidArgument, "tabulated sample times must be strictly increasing");
    }
  }
  Worldline w;
  w.kind_ = Kind::Tabulated;
  w.c_ = c;
  w.t_lo_ = times.front();
  w.t_hi_ = times.back();
  w.times_ = std::move(times);
  w.positions_ = std::move(positions);
  w.origin_ = w.positions_.front();

  const std::size_t n = w.times_.size();
  w.slopes_.assign(n, Vec3d::Zero());
  for (int comp = 0; comp < 3; ++comp) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = w.positions_[i](comp);
    const auto d = pchip_slopes(w.times_, y);
    for (std::size_t i = 0; i < n; ++i) w.slopes_[i](comp) = d[i];
  }

  // Reject any sample set whose interpolant leaves the light cone.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (int j = 0; j <= 32; ++j) {
      const double t = w.times_[k] + (w.times_[k + 1] - w.times_[k]) * j / 32.0;
      const Vec3d v = w.velocity(t);
      if (!(v.norm() < c)) {
        std::ostringstream os;
        os << "interpolated speed " << v.norm() << " >= c at t = " << t;
        throw Error(ErrorKind::SuperluminalTrajectory, os.str());
      }
    }
  }

  w.tau_knots_.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double a = w.times_[k], b = w.times_[k + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = quad::detail::kKronrodWeights[10] / w.lorentz_factor(mid);
    for (int j = 0; j < 10; ++j) {
      const double dx = half * quad::detail::kKronrodNodes[j];
      sum += quad::detail::kKronrodWeights[j] *
             (1.0 / w.lorentz_factor(mid - dx) + 1.0 / w.lorentz_factor(mid + dx));
    }
    w.tau_knots_[k + 1] = w.tau_knots_[k] + sum * half;
  }
  return w;
}

void Worldline::check_domain(double t) const {
  if (!(t >= t_lo_ && t <= t_hi_)) {
    std::ostringstream os;
    os << "t = " << t << " outside worldline domain [" << t_lo_ << ", " << t_hi_ << "]";
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
}

std::size_t Worldline::segment(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = (it == times_.begin()) ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  return std::min(k, times_.size() - 2);
}

Vec3d Worldline::position(double t) const {
  check_domain(t);
  switch (kind_) {
    case Kind::Rest:
      return origin_;
    case Kind::Inertial:
      return origin_ + velocity_ * t;
    case Kind::UniformAcceleration: {
      const double u = acceleration_ * t / c_;
      // sqrt(1 + u^2) - 1 without cancellation.
      const double rise = u * u / (std::sqrt(1.0 + u * u) + 1.0);
      return origin_ + direction_ * (c_ * c_ / acceleration_) * rise;
    }
    case Kind::Tabulated: {
      const std::size_t k = segment(t);
      const double h = times_[k + 1] - times_[k];
      const Hermite b = basis((t - times_[k]) / h);
      return b.h00 * positions_[k] + b.h10 * h * slopes_[k] + b.h01 * positions_[k + 1] +
             b.h11 * h * slopes_[k + 1];
    }
  }
  return origin_;
}

Vec3d Worldline::velocity(double t) const {
  check_domain(t);
  switch (kind_) {
    case Kind::Rest:
      return Vec3d::Zero();
    case Kind::Inertial:
      return velocity_;
    case Kind::UniformAcceleration: {
      const double u = acceleration_ * t / c_;
      return direction_ * (acceleration_ * t / std::sqrt(1.0 + u * u));
    }
    case Kind::Tabulated: {
      const std::size_t k = segment(t);
      const double h = times_[k + 1] - times_[k];
      const Hermite b = basis_prime((t - times_[k]) / h);
      return (b.h00 * positions_[k] + b.h01 * positions_[k + 1]) / h + b.h10 * slopes_[k] +
             b.h11 * slopes_[k + 1];
    }
  }
  return Vec3d::Zero();
}

double Worldline::lorentz_factor(double t) const {
  switch (kind_) {
    case Kind::Rest:
      check_domain(t);
      return 1.0;
    case Kind::UniformAcceleration: {
      check_domain(t);
      const double u = acceleration_ * t / c_;
      return std::sqrt(1.0 + u * u);
    }
    default: {
      const Vec3d v = velocity(t);
      if (!(v.norm() < c_)) {
        std::ostringstream os;
        os << "speed " << v.norm() << " >= c at t = " << t;
        throw Error(ErrorKind::SuperluminalTrajectory, os.str());
      }
      return udw::lorentz_factor<double>(v, c_);
    }
  }
}

double Worldline::tabulated_proper_time_from_start(double t) const {
  const std::size_t k = segment(t);
  const double a = times_[k];
  if (t == a) return tau_knots_[k];
  const double mid = 0.5 * (a + t), half = 0.5 * (t - a);
  double sum = quad::detail::kKronrodWeights[10] / lorentz_factor(mid);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * quad::detail::kKronrodNodes[j];
    sum += quad::detail::kKronrodWeights[j] *
           (1.0 / lorentz_factor(mid - dx) + 1.0 / lorentz_factor(mid + dx));
  }
  return tau_knots_[k] + sum * half;
}

double Worldline::proper_time(double t, double t0) const {
  check_domain(t);
  check_domain(t0);
  switch (kind_) {
    case Kind::Rest:
      return t - t0;
    case Kind::Inertial:
      return (t - t0) / udw::lorentz_factor<double>(velocity_, c_);
    case Kind::UniformAcceleration:
      return (c_ / acceleration_) *
             (std::asinh(acceleration_ * t / c_) - std::asinh(acceleration_ * t0 / c_));
    case Kind::Tabulated:
      return tabulated_proper_time_from_start(t) - tabulated_proper_time_from_start(t0);
  }
  return 0.0;
}

double Worldline::coordinate_time(double tau, double t0) const {
  check_domain(t0);
  switch (kind_) {
    case Kind::Rest:
      return t0 + tau;
    case Kind::Inertial:
      return t0 + udw::lorentz_factor<double>(velocity_, c_) * tau;
    case Kind::UniformAcceleration:
      return (c_ / acceleration_) *
             std::sinh(acceleration_ * tau / c_ + std::asinh(acceleration_ * t0 / c_));
    case Kind::Tabulated:
      break;
  }

  const double target = tabulated_proper_time_from_start(t0) + tau;
  if (target < tau_knots_.front() - 1e-14 || target > tau_knots_.back() + 1e-14) {
    std::ostringstream os;
    os << "proper time " << tau << " outside the image of the tabulated worldline";
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
  auto it = std::upper_bound(tau_knots_.begin(), tau_knots_.end(), target);
  std::size_t k = (it == tau_knots_.begin()) ? 0 : static_cast<std::size_t>(it - tau_knots_.begin()) - 1;
  k = std::min(k, times_.size() - 2);
  double lo = times_[k], hi = times_[k + 1];
  // Newton on tau(t) - target with dtau/dt = 1/gamma, safeguarded by bisection.
  double t = lo + (target - tau_knots_[k]) * lorentz_factor(lo);
  if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = tabulated_proper_time_from_start(t) - target;
    if (std::abs(f) <= 1e-13 * std::max(1.0, std::abs(target))) return t;
    if (f > 0.0) hi = t; else lo = t;
    double next = t - f * lorentz_factor(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(t))) return next;
    t = next;
  }
  throw Error(ErrorKind::InversionFailure, "proper-time inversion did not converge");
}

Worldline::Sample Worldline::at_proper_time(double tau, double t0) const {
  Sample s;
  switch (kind_) {
    case Kind::UniformAcceleration: {
      const double eta = acceleration_ * tau / c_ + std::asinh(acceleration_ * t0 / c_);
      const double sh = std::sinh(0.5 * eta);
      s.t = (c_ / acceleration_) * std::sinh(eta);
      s.x = origin_ + direction_ * (c_ * c_ / acceleration_) * (2.0 * sh * sh);
      s.v = direction_ * (c_ * std::tanh(eta));
      s.gamma = std::cosh(eta);
      return s;
    }
    default:
      s.t = coordinate_time(tau, t0);
      s.x = position(s.t);
      s.v = velocity(s.t);
      s.gamma = lorentz_factor(s.t);
      return s;
  }
}

Vec3d Worldline::inertial_velocity() const {
  if (!is_inertial()) throw Error(ErrorKind::InvalidArgument, "worldline is not inertial");
  return velocity_;
}

std::optional<Vec3d> Worldline::motion_axis() const {
  switch (kind_) {
    case Kind::Rest:
      return std::nullopt;
    case Kind::Inertial:
    case Kind::UniformAcceleration:
      return direction_;
    case Kind::Tabulated: {
      Vec3d axis = Vec3d::Zero();
      for (const auto& p : positions_) {
        const Vec3d d = p - positions_.front();
        if (d.norm() > axis.norm()) axis = d;
      }
      if (axis.norm() == 0.0) return std::nullopt;
      axis.normalize();
      for (const auto& p : positions_) {
        const Vec3d d = p - positions_.front();
        if ((d - d.dot(axis) * axis).norm() > 1e-12 * std::max(1.0, d.norm())) return std::nullopt;
      }
      return axis;
    }
  }
  return std::nullopt;
}

double Worldline::max_proper_acceleration() const {
  switch (kind_) {
    case Kind::Rest:
    case Kind::Inertial:
      return 0.0;
    case Kind::UniformAcceleration:
      return acceleration_;
    case Kind::Tabulated:
      break;
  }
  double best = 0.0;
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    const double h = times_[k + 1] - times_[k];
    for (int j = 0; j <= 16; ++j) {
      const double s = j / 16.0;
      const Hermite b = basis_second(s);
      const Vec3d acc = (b.h00 * positions_[k] + b.h01 * positions_[k + 1]) / (h * h) +
                        (b.h10 * slopes_[k] + b.h11 * slopes_[k + 1]) / h;
      const Vec3d v = velocity(times_[k] + s * h);
      const double g = udw::lorentz_factor<double>(v, c_);
      const double alpha2 =
          std::pow(g, 4) * (acc.squaredNorm() + g * g * std::pow(v.dot(acc), 2) / (c_ * c_));
      best = std::max(best, std::sqrt(alpha2));
    }
  }
  return best;
}

std::string Worldline::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Rest:
      os << "rest";
      break;
    case Kind::Inertial:
      os << "inertial(|v|=" << velocity_.norm() << ")";
      break;
    case Kind::UniformAcceleration:
      os << "uniform_acceleration(a=" << acceleration_ << ")";
      break;
    case Kind::Tabulated:
      os << "tabulated(" << times_.size() << " samples)";
      break;
  }
  return os.str();
}

Vec3d velocity(const Worldline& w, double t) { return w.velocity(t); }
double lorentz_factor(const Worldline& w, double t) { return w.lorentz_factor(t); }
double proper_time(const Worldline& w, double t, double t0) { return w.proper_time(t, t0); }
double coordinate_time(const Worldline& w, double tau, double t0) {
  return w.coordinate_time(tau, t0);
}

}  // namespace udw
