#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace udw {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

/// Spacetime event (time coordinate first, then up to three spatial
/// components). Unused spatial components are kept at zero for d < 3.
template <typename Scalar>
using Event = Eigen::Matrix<Scalar, 4, 1>;

using Vec3d = Vec3<double>;
using Event4d = Event<double>;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

enum class ErrorKind {
  InvalidArgument,
  OutOfDomain,
  SuperluminalTrajectory,
  SuperluminalBoost,
  QuadratureFailure,
  InversionFailure,
  NotPointlike,
  MapNotInvertibleOnSupport,
  ZeroMode,
  IRDivergence,
  StepTooCoarse,
  FitFailure,
  ParseError,
  ValidationError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Event4d make_event(double t, const Vec3d& x) {
  Event4d e;
  e << t, x;
  return e;
}

inline Vec3d spatial(const Event4d& e) { return e.tail<3>(); }

}  // namespace udw
