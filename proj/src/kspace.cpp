#include "kspace.hpp"

#include <array>
#include <cmath>

#include "udw/quadrature.hpp"

namespace udw::detail {

Vec3d orthogonal_in_plane(const Vec3d& axis, int dimension) {
  if (dimension == 2) return Vec3d(-axis(1), axis(0), 0.0).normalized();
  const Vec3d trial = std::abs(axis(0)) < 0.9 ? Vec3d::UnitX() : Vec3d::UnitY();
  return (trial - trial.dot(axis) * axis).normalized();
}

namespace {

// Breakpoints in the graded variable y; exp(-36) is below double resolution.
constexpr std::array<double, 7> kGraded{-36.0, -12.0, -4.0, 0.0, 4.0, 12.0, 36.0};

// Integral of g(mu, sqrt(1 - mu^2)) over mu in [-1, 1], substituting
// 1 - |mu| = exp(-|y|) so structure bunched against the axis is resolved
// in a few panels.
template <typename G>
double graded_mu(G&& g, const quad::Tolerance& tol) {
  auto h = [&](double y) {
    const double e = std::exp(-std::abs(y));
    const double mu = std::copysign(1.0 - e, y);
    return e * g(mu, std::sqrt(e * (2.0 - e)));
  };
  return quad::integrate_adaptive<double>(h, std::span<const double>(kGraded), tol).value;
}

// Integral of g(cos phi, sin phi) over phi in [0, pi] with the same grading
// towards phi = 0 and phi = pi.
template <typename G>
double graded_phi(G&& g, const quad::Tolerance& tol) {
  auto h = [&](double y) {
    const double d = 0.5 * kPi * std::exp(-std::abs(y));
    const double phi = y >= 0.0 ? d : kPi - d;
    return d * g(std::cos(phi), std::sin(phi));
  };
  return quad::integrate_adaptive<double>(h, std::span<const double>(kGraded), tol).value;
}

struct Radial {
  const ModeFunction& F;
  const KSpaceProblem& p;
  Vec3d e1;
  Vec3d e2;
  long calls = 0;
  // Absolute accuracy wanted from the radial integrand on the current chunk.
  double radial_abs = 0.0;

  quad::Tolerance angular_tol(double radial_factor, double range) const {
    quad::Tolerance tol;
    tol.rel = std::max(1e-13, 0.1 * p.rel_tol);
    tol.abs = std::max(p.integrand_floor * range, radial_abs / radial_factor);
    tol.max_intervals = 2000;
    return tol;
  }

  double point_abs(double radial_factor) const { return std::max(p.integrand_floor, radial_abs / radial_factor); }

  // Angular average times the radial part of the measure, so the result is
  // integrated in dk alone.
  double operator()(double k) {
    if (k <= 0.0) return 0.0;
    const Vec3d& n = p.axis;
    switch (p.dimension) {
      case 1: {
        calls += 2;
        const double f = 1.0 / (4.0 * kPi * k);
        const double a = point_abs(f);
        return f * (F(k * n, a) + F(-k * n, a));
      }
      case 2: {
        if (p.symmetry == Symmetry::Isotropic) {
          ++calls;
          const double f = 1.0 / (4.0 * kPi);
          return f * F(k * n, point_abs(f));
        }
        const bool axial = p.symmetry == Symmetry::Axial;
        const double f = axial ? 1.0 / (4.0 * kPi * kPi) : 1.0 / (8.0 * kPi * kPi);
        const double range = axial ? kPi : 2.0 * kPi;
        const quad::Tolerance tol = angular_tol(f, range);
        const double a = tol.abs / range;
        auto upper = [&](double cs, double sn) {
          ++calls;
          return F(k * (cs * n + sn * e1), a);
        };
        if (axial) return f * graded_phi(upper, tol);
        auto lower = [&](double cs, double sn) {
          ++calls;
          return F(k * (cs * n - sn * e1), a);
        };
        quad::Tolerance half = tol;
        half.abs *= 0.5;
        return f * (graded_phi(upper, half) + graded_phi(lower, half));
      }
      default: {
        if (p.symmetry == Symmetry::Isotropic) {
          ++calls;
          const double f = k / (4.0 * kPi * kPi);
          return f * F(k * n, point_abs(f));
        }
        if (p.symmetry == Symmetry::Axial) {
          const double f = k / (8.0 * kPi * kPi);
          const quad::Tolerance tol = angular_tol(f, 2.0);
          auto g = [&](double mu, double s) {
            ++calls;
            return F(k * (mu * n + s * e1), 0.5 * tol.abs);
          };
          return f * graded_mu(g, tol);
        }
        const double f = k / (16.0 * kPi * kPi * kPi);
        const quad::Tolerance tol = angular_tol(f, 4.0 * kPi);
        auto g = [&](double mu, double s) {
          auto h = [&](double phi) {
            ++calls;
            return F(k * (mu * n + s * (std::cos(phi) * e1 + std::sin(phi) * e2)), 0.1 * tol.abs / (4.0 * kPi));
          };
          quad::Tolerance inner = tol;
          inner.rel = std::max(1e-14, 0.1 * tol.rel);
          inner.abs = 0.1 * tol.abs;
          return quad::integrate_adaptive<double>(h, 0.0, 2.0 * kPi, inner).value;
        };
        return f * graded_mu(g, tol);
      }
    }
  }
};

}  // namespace

KSpaceResult integrate_kspace(const ModeFunction& F, const KSpaceProblem& p) {
  Radial radial{F, p, Vec3d::Zero(), Vec3d::Zero()};
  radial.e1 = orthogonal_in_plane(p.axis, p.dimension);
  radial.e2 = p.axis.cross(radial.e1);

  KSpaceResult out;
  double lo = p.k_min;
  double hi = std::max(p.k_min, 0.0) + p.k_scale;
  // A coarse pass over the first chunk sets the scale for absolute
  // tolerances before any chunk has been accumulated.
  double scale = 0.0;
  if (p.rel_tol < 1e-3) {
    KSpaceProblem coarse = p;
    coarse.rel_tol = 1e-3;
    coarse.integrand_floor = std::max(p.integrand_floor, 1e-8 * p.integrand_bound);
    Radial pilot{F, coarse, radial.e1, radial.e2};
    quad::Tolerance tol;
    tol.rel = 1e-3;
    tol.max_intervals = 50;
    scale = std::abs(quad::integrate_adaptive<double>(std::ref(pilot), lo, hi, tol).value);
    radial.calls += pilot.calls;
  }
  int quiet = 0;
  double last_chunk = 0.0;
  std::vector<double> chunks;
  std::vector<double> errors;
  for (int chunk = 0;; ++chunk) {
    if (chunk >= p.max_chunks) {
      throw Error(ErrorKind::QuadratureFailure, "momentum integral tail did not decay");
    }
    double running = 0.0;
    for (double c : chunks) running += c;
    quad::Tolerance tol;
    tol.rel = p.rel_tol;
    const double reference = std::max(std::abs(running), 0.5 * scale);
    tol.abs = 0.1 * p.rel_tol * reference;
    tol.max_intervals = 400;
    radial.radial_abs = 0.01 * p.rel_tol * reference / (hi - lo);
    const auto est = quad::integrate_adaptive<double>(std::ref(radial), lo, hi, tol);
    if (!est.converged && est.error > 10.0 * tol.target(std::abs(est.value))) {
      throw Error(ErrorKind::QuadratureFailure, "momentum integral did not converge");
    }
    chunks.push_back(est.value);
    errors.push_back(est.error);
    last_chunk = est.value;
    running += est.value;
    out.k_max = hi;
    if (hi >= p.k_decay) {
      if (std::abs(est.value) <= 1e-3 * p.rel_tol * std::abs(running)) {
        if (++quiet == 2) break;
      } else {
        quiet = 0;
      }
    }
    lo = hi;
    hi = 2.0 * hi;
  }
  out.value = quad::pairwise_sum<double>(chunks);
  // The last chunk bounds a geometrically decaying tail.
  out.abs_error = quad::pairwise_sum<double>(errors) + std::abs(last_chunk);
  out.integrand_calls = radial.calls;
  return out;
}

}  // namespace udw::detail
