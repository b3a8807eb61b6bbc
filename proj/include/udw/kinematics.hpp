#pragma once

#include <cmath>

#include "udw/types.hpp"

// Special-relativistic helpers, templated on scalar so they compose with
// Eigen expressions. Metric signature (-,+,+,+); c is explicit.

namespace udw {

template <typename Scalar>
Scalar lorentz_factor(const Vec3<Scalar>& v, Scalar c) {
  using std::sqrt;
  const Scalar beta2 = v.squaredNorm() / (c * c);
  return Scalar(1) / sqrt(Scalar(1) - beta2);
}

/// 4x4 matrix taking detector-frame components (c*tau, xi) to lab components
/// (c*t, x) for a frame moving with velocity v. Pure boost, no rotation.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> boost_matrix(const Vec3<Scalar>& v, Scalar c) {
  Eigen::Matrix<Scalar, 4, 4> m = Eigen::Matrix<Scalar, 4, 4>::Identity();
  const Scalar speed = v.norm();
  if (speed == Scalar(0)) return m;
  const Scalar gamma = lorentz_factor(v, c);
  const Vec3<Scalar> beta = v / c;
  const Vec3<Scalar> n = v / speed;
  m(0, 0) = gamma;
  m.template block<1, 3>(0, 1) = gamma * beta.transpose();
  m.template block<3, 1>(1, 0) = gamma * beta;
  m.template block<3, 3>(1, 1) += (gamma - Scalar(1)) * n * n.transpose();
  return m;
}

/// (tau, xi) -> (t, x): t = gamma (tau + v.xi / c^2),
/// x_par = gamma (xi_par + |v| tau), x_perp = xi_perp.
template <typename Scalar>
Event<Scalar> boost_to_lab(const Event<Scalar>& detector_event, const Vec3<Scalar>& v, Scalar c) {
  const Scalar speed = v.norm();
  if (speed == Scalar(0)) return detector_event;
  const Scalar gamma = lorentz_factor(v, c);
  const Scalar tau = detector_event(0);
  const Vec3<Scalar> xi = detector_event.template tail<3>();
  const Vec3<Scalar> n = v / speed;
  const Scalar xi_par = n.dot(xi);
  Event<Scalar> out;
  out(0) = gamma * (tau + v.dot(xi) / (c * c));
  out.template tail<3>() = xi + ((gamma - Scalar(1)) * xi_par + gamma * speed * tau) * n;
  return out;
}

/// (t, x) -> (tau, xi): tau = gamma (t - v.x / c^2), xi_par = gamma (x_par - |v| t).
template <typename Scalar>
Event<Scalar> boost_to_detector(const Event<Scalar>& lab_event, const Vec3<Scalar>& v, Scalar c) {
  const Scalar speed = v.norm();
  if (speed == Scalar(0)) return lab_event;
  const Scalar gamma = lorentz_factor(v, c);
  const Scalar t = lab_event(0);
  const Vec3<Scalar> x = lab_event.template tail<3>();
  const Vec3<Scalar> n = v / speed;
  const Scalar x_par = n.dot(x);
  Event<Scalar> out;
  out(0) = gamma * (t - v.dot(x) / (c * c));
  out.template tail<3>() = x + ((gamma - Scalar(1)) * x_par - gamma * speed * t) * n;
  return out;
}

}  // namespace udw
