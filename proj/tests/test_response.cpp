#include <cmath>
#include <random>

#include "doctest.h"
#include "udw/quadrature.hpp"
#include "udw/response.hpp"

using namespace udw;

namespace {

constexpr double kSigma = 1.0;

// Gaussian switching of width sigma, pointlike detector at rest in 3+1.
double rest_oracle(double omega) {
  const double x = kSigma * omega;
  return (std::exp(-x * x) - std::sqrt(kPi) * x * std::erfc(x)) / (4.0 * kPi);
}

// Same in 2+1: (sigma sqrt(pi) / 4) erfc(sigma Omega).
double rest_oracle_2d(double omega) { return kSigma * std::sqrt(kPi) / 4.0 * std::erfc(kSigma * omega); }

// Gaussian ball of width eps at rest in 3+1, from the radial integral of
// k exp(-eps^2 k^2) exp(-sigma^2 (Omega + k)^2) done in closed form.
double smeared_rest_oracle(double omega, double eps) {
  const double s2 = kSigma * kSigma;
  const double A = s2 + eps * eps;
  const double b = s2 * omega / A;
  const double C = s2 * eps * eps * omega * omega / A;
  const double radial =
      std::exp(-A * b * b) / (2.0 * A) - b * std::sqrt(kPi) / (2.0 * std::sqrt(A)) * std::erfc(std::sqrt(A) * b);
  return s2 / (2.0 * kPi) * std::exp(-C) * radial;
}

// Uniform acceleration a in 3+1 from the position-space Wightman function:
// the thermal kernel minus the inertial one is regular, and the inertial
// part is the rest result.
double accelerated_oracle(double omega, double a) {
  auto excess = [&](double s) {
    const double x = 0.5 * a * s;
    double bracket;
    if (std::abs(x) < 1e-3) {
      bracket = 0.25 * a * a * (-1.0 / 3.0 + x * x / 15.0);
    } else {
      const double sh = std::sinh(x);
      bracket = 0.25 * a * a / (sh * sh) - 1.0 / (s * s);
    }
    return -std::exp(-s * s / (4.0 * kSigma * kSigma)) * std::cos(omega * s) * bracket / (4.0 * kPi * kPi);
  };
  quad::Tolerance tol;
  tol.rel = 1e-13;
  const std::array<double, 5> bp{-40.0, -5.0, 0.0, 5.0, 40.0};
  const double extra = quad::integrate_adaptive<double>(excess, std::span<const double>(bp), tol).value;
  return rest_oracle(omega) + std::sqrt(kPi) * kSigma * extra;
}

Scenario base(double omega) {
  Scenario s;
  s.detector.gap = omega;
  s.switching = SwitchingProfile::gaussian(kSigma);
  return s;
}

ResponseOptions tolerance(double rel) {
  ResponseOptions o;
  o.rel_tol = rel;
  return o;
}

}  // namespace

TEST_CASE("k-tilde is null and reduces to (-|k|, k) at rest") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Vec3d v(u(rng), u(rng), u(rng));
    v *= 0.99 * std::abs(u(rng)) / std::max(1.0, v.norm());
    const Vec3d k = 10.0 * Vec3d(u(rng), u(rng), u(rng));
    const NullCovector kt = ktilde(v, k);
    CHECK(std::abs(kt.interval(1.0)) <= 1e-12 * std::max(1.0, kt.k0 * kt.k0));
  }
  const Vec3d k(0.3, -1.2, 2.0);
  const NullCovector rest = ktilde(Vec3d::Zero(), k);
  CHECK(rest.k0 == -k.norm());
  CHECK(rest.k == k);
  // The printed alternative is not null once v != 0.
  const NullCovector printed = ktilde(Vec3d(0.6, 0.0, 0.0), k, 1.0, true);
  CHECK(std::abs(printed.interval(1.0)) > 0.1);
  CHECK_THROWS_AS(ktilde(Vec3d(1.0, 0.0, 0.0), k), Error);
}

TEST_CASE("Doppler shift along the motion") {
  const Vec3d v(0.6, 0.0, 0.0);
  const double omega = 1.0;
  for (double kn : {0.5, 1.0, 4.0}) {
    const NullCovector kt = ktilde(v, kn * Vec3d::UnitX());
    CHECK(omega - kt.k0 == doctest::Approx(omega + 0.5 * kn).epsilon(1e-14));
  }
  Scenario s = base(omega);
  s.worldline = Worldline::inertial(v);
  for (double kn : {0.5, 2.0}) {
    const Vec3d k = kn * Vec3d::UnitX();
    const Complex want = s.switching.fourier(omega + 0.5 * kn);
    for (Route r : {Route::DetectorFrame, Route::LabFrame, Route::InertialClosed}) {
      CHECK(std::abs(mode_amplitude(s, k, r, tolerance(1e-10)) - want) < 1e-10);
    }
  }
}

TEST_CASE("Wightman momentum kernel") {
  FieldSpec f;
  const Vec3d k(0.0, 2.0, 0.0);
  const Complex on_axis = wightman_momentum_kernel(f, k, Event4d(1.0, 0.0, 1.0, 0.0));
  CHECK(on_axis.real() == doctest::Approx(1.0 / (2.0 * std::pow(2.0 * kPi, 3) * 2.0)));
  CHECK(std::abs(on_axis.imag()) < 1e-18);
  const Complex timelike = wightman_momentum_kernel(f, k, Event4d(0.25, 0.0, 0.0, 0.0));
  CHECK(std::arg(timelike) == doctest::Approx(-0.5));
  f.dimension = 2;
  CHECK(std::abs(wightman_momentum_kernel(f, k, Event4d::Zero())) ==
        doctest::Approx(1.0 / (2.0 * std::pow(2.0 * kPi, 2) * 2.0)));
  CHECK_THROWS_AS(wightman_momentum_kernel(f, Vec3d::Zero(), Event4d::Zero()), Error);
}

TEST_CASE("zero coupling gives zero on every route") {
  Scenario s = base(1.0);
  s.detector.coupling = 0.0;
  for (Route r : {Route::DetectorFrame, Route::LabFrame, Route::InertialClosed, Route::SmearedInertial}) {
    const auto p = probability(s, r);
    CHECK(p.value == 0.0);
    CHECK(p.abs_error == 0.0);
  }
}

TEST_CASE("detector at rest matches the closed-form response") {
  for (double omega : {0.5, 1.0, 2.0}) {
    const Scenario s = base(omega);
    const double want = rest_oracle(omega);
    for (Route r : {Route::DetectorFrame, Route::LabFrame, Route::InertialClosed, Route::SmearedInertial}) {
      const auto p = probability(s, r, tolerance(1e-10));
      CHECK(p.value == doctest::Approx(want).epsilon(1e-9));
      CHECK(p.abs_error < 1e-8 * want);
      CHECK_FALSE(p.flagged_negative);
    }
  }
}

TEST_CASE("coupling and c scale the probability") {
  Scenario s = base(1.0);
  s.detector.coupling = 0.5;
  CHECK(probability(s, Route::InertialClosed).value == doctest::Approx(0.25 * rest_oracle(1.0)).epsilon(1e-9));
}

TEST_CASE("2+1 dimensions at rest") {
  Scenario s = base(1.0);
  s.field.dimension = 2;
  for (Route r : {Route::DetectorFrame, Route::InertialClosed}) {
    CHECK(probability(s, r, tolerance(1e-9)).value == doctest::Approx(rest_oracle_2d(1.0)).epsilon(1e-8));
  }
  s.worldline = Worldline::inertial(Vec3d(0.0, 0.5, 0.0));
  CHECK(probability(s, Route::DetectorFrame, tolerance(1e-8)).value ==
        doctest::Approx(rest_oracle_2d(1.0)).epsilon(1e-6));
}

TEST_CASE("1+1 dimensions need an infrared cutoff") {
  Scenario s = base(1.0);
  s.field.dimension = 1;
  CHECK_THROWS_AS(probability(s, Route::InertialClosed), Error);
  try {
    probability(s, Route::DetectorFrame);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IRDivergence);
  }
  s.field.ir_cutoff = 0.1;
  auto integrand = [](double k) { return std::exp(-(1.0 + k) * (1.0 + k)) / k; };
  quad::Tolerance tol;
  tol.rel = 1e-13;
  const double want = quad::integrate_adaptive<double>(integrand, 0.1, 40.0, tol).value;
  CHECK(probability(s, Route::InertialClosed, tolerance(1e-10)).value == doctest::Approx(want).epsilon(1e-9));
  CHECK(probability(s, Route::DetectorFrame, tolerance(1e-9)).value == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("inertial motion leaves the vacuum response unchanged") {
  Scenario s = base(1.0);
  s.worldline = Worldline::inertial(Vec3d(0.6, 0.0, 0.0));
  const double want = rest_oracle(1.0);
  CHECK(probability(s, Route::InertialClosed, tolerance(1e-10)).value == doctest::Approx(want).epsilon(1e-9));
  for (Route r : {Route::DetectorFrame, Route::LabFrame}) {
    const auto p = probability(s, r, tolerance(1e-7));
    CHECK(p.value == doctest::Approx(want).epsilon(1e-7));
    CHECK(p.abs_error < 1e-6 * want);
  }
}

TEST_CASE("lab-time switching of a moving detector") {
  // chi(t) along x = v t is chi(gamma tau) in proper time: width sigma / gamma.
  Scenario s = base(1.0);
  s.worldline = Worldline::inertial(Vec3d(0.6, 0.0, 0.0));
  s.switching_frame = SwitchingFrame::Lab;
  const double closed = probability(s, Route::InertialClosed, tolerance(1e-10)).value;
  for (Route r : {Route::DetectorFrame, Route::LabFrame}) {
    CHECK(probability(s, r, tolerance(1e-7)).value == doctest::Approx(closed).epsilon(1e-6));
  }
  Scenario narrow = base(1.0);
  narrow.switching = SwitchingProfile::gaussian(0.8);
  CHECK(probability(narrow, Route::InertialClosed, tolerance(1e-10)).value ==
        doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("uniform acceleration matches the thermal Wightman function") {
  Scenario s = base(1.0);
  s.worldline = Worldline::uniform_acceleration(0.5, Vec3d::UnitX());
  const double want = accelerated_oracle(1.0, 0.5);
  CHECK(want > rest_oracle(1.0));
  for (Route r : {Route::DetectorFrame, Route::LabFrame}) {
    const auto p = probability(s, r, tolerance(1e-5));
    CHECK(p.value == doctest::Approx(want).epsilon(1e-6));
  }
  CHECK_THROWS_AS(probability(s, Route::InertialClosed), Error);
}

TEST_CASE("smeared detector at rest and its pointlike limit") {
  const double omega = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (double eps : {0.5, 0.2, 0.1, 0.05, 0.01}) {
    Scenario s = base(omega);
    s.smearing = SmearingProfile::gaussian_ball(eps);
    const double p = probability(s, Route::SmearedInertial, tolerance(1e-10)).value;
    CHECK(p == doctest::Approx(smeared_rest_oracle(omega, eps)).epsilon(1e-9));
    const double gap = std::abs(p - rest_oracle(omega)) / rest_oracle(omega);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous <= 1e-3);
}

TEST_CASE("smeared detector rejects pointlike-only routes") {
  Scenario s = base(1.0);
  s.smearing = SmearingProfile::gaussian_ball(0.2);
  CHECK_THROWS_AS(probability(s, Route::DetectorFrame), Error);
  CHECK_THROWS_AS(probability(s, Route::InertialClosed), Error);
}

TEST_CASE("moving smeared detector: closed form and spacetime density agree") {
  Scenario s = base(1.0);
  s.smearing = SmearingProfile::gaussian_ball(0.3);
  const double rest = smeared_rest_oracle(1.0, 0.3);
  s.worldline = Worldline::inertial(Vec3d(0.6, 0.0, 0.0));
  // Smearing rigid in the rest frame of an inertial detector: the vacuum
  // response cannot depend on the velocity.
  const double moving = probability(s, Route::SmearedInertial, tolerance(1e-10)).value;
  CHECK(moving == doctest::Approx(rest).epsilon(1e-9));
  ResponseOptions printed = tolerance(1e-10);
  printed.use_printed_ktilde = true;
  CHECK(std::abs(probability(s, Route::SmearedInertial, printed).value - rest) > 1e-3 * rest);
  CHECK(probability(s, Route::Density, tolerance(1e-5)).value == doctest::Approx(rest).epsilon(1e-6));
  s.worldline = Worldline::rest();
  CHECK(probability(s, Route::Density, tolerance(1e-8)).value == doctest::Approx(rest).epsilon(1e-8));
}

TEST_CASE("accelerated smeared detector approaches the pointlike response") {
  Scenario s = base(1.0);
  s.worldline = Worldline::uniform_acceleration(0.5, Vec3d::UnitX());
  const double point = accelerated_oracle(1.0, 0.5);
  double previous = std::numeric_limits<double>::infinity();
  for (double eps : {0.1, 0.02}) {
    s.smearing = SmearingProfile::gaussian_ball(eps);
    const double p = probability(s, Route::Density, tolerance(1e-4)).value;
    CHECK(p < point);
    const double gap = (point - p) / point;
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("emission dominates excitation") {
  for (double omega : {0.5, 1.0, 2.0}) {
    const Scenario s = base(omega);
    const double up = probability(s, Route::InertialClosed).value;
    const double down = emission_probability(s, Route::InertialClosed).value;
    CHECK(down >= up);
  }
  Scenario s = base(1.0);
  s.worldline = Worldline::uniform_acceleration(1.0, Vec3d::UnitX());
  CHECK(emission_probability(s, Route::DetectorFrame, tolerance(1e-4)).value >=
        probability(s, Route::DetectorFrame, tolerance(1e-4)).value);
  const Scenario zero = base(0.0);
  CHECK(emission_probability(zero, Route::InertialClosed).value ==
        probability(zero, Route::InertialClosed).value);
}

TEST_CASE("route names round trip") {
  for (Route r : {Route::DetectorFrame, Route::LabFrame, Route::InertialClosed, Route::SmearedInertial,
                  Route::Density}) {
    CHECK(route_from_string(to_string(r)) == r);
  }
  CHECK_FALSE(route_from_string("nope").has_value());
}
