#include <cmath>
#include <random>

#include "doctest.h"
#include "udw/quadrature.hpp"

using namespace udw;

TEST_CASE("kronrod rule is exact for high-degree polynomials") {
  quad::Tolerance tol;
  tol.rel = 1e-13;
  const auto est = quad::integrate_adaptive<double>(
      [](double x) { return std::pow(x, 19) - 3.0 * std::pow(x, 7) + 1.0; }, -1.0, 2.0, tol);
  const double exact = (std::pow(2.0, 20) - 1.0) / 20.0 - 3.0 * (std::pow(2.0, 8) - 1.0) / 8.0 + 3.0;
  CHECK(est.value == doctest::Approx(exact).epsilon(1e-14));
  CHECK(est.intervals == 1);
}

TEST_CASE("adaptive refinement handles an endpoint singularity") {
  quad::Tolerance tol;
  tol.rel = 1e-10;
  const auto est = quad::integrate_adaptive<double>([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, tol);
  CHECK(est.converged);
  CHECK(est.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("oscillatory integrator matches the Gaussian transform at high frequency") {
  quad::Tolerance tol;
  tol.rel = 1e-12;
  tol.abs = 1e-15;
  for (double w : {0.0, 0.5, 3.0, 40.0, 2000.0}) {
    const auto est = quad::integrate_oscillatory(
        [](double t) { return Complex(std::exp(-0.5 * t * t), 0.0); }, [w](double t) { return w * t; },
        [w](double) { return w; }, -9.0, 9.0, tol);
    const double exact = std::sqrt(2.0 * kPi) * std::exp(-0.5 * w * w);
    CHECK(est.converged);
    CHECK(std::abs(est.value - exact) < 1e-13);
    if (w == 2000.0) CHECK(est.intervals < 200);
  }
}

TEST_CASE("oscillatory integrator isolates a stationary point") {
  // int_{-1}^{1} exp(i 200 x^2) dx against Fresnel-style high-resolution reference.
  const double w = 200.0;
  quad::Tolerance tol;
  tol.rel = 1e-11;
  const auto est = quad::integrate_oscillatory([](double) { return Complex(1.0, 0.0); },
                                               [w](double x) { return w * x * x; },
                                               [w](double x) { return 2.0 * w * x; }, -1.0, 1.0, tol);
  quad::Tolerance ref_tol;
  ref_tol.rel = 1e-13;
  ref_tol.max_intervals = 100000;
  const auto ref = quad::integrate_adaptive<Complex>(
      [w](double x) { return std::polar(1.0, w * x * x); }, quad::uniform_breakpoints(-1.0, 1.0, 400), ref_tol);
  CHECK(est.converged);
  CHECK(std::abs(est.value - ref.value) < 1e-10);
}

TEST_CASE("pairwise sum is order independent for equal inputs") {
  std::vector<double> xs(1000, 0.1);
  CHECK(quad::pairwise_sum<double>(xs) == doctest::Approx(100.0).epsilon(1e-15));
}

TEST_CASE("small dense solve matches Eigen's LU") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Matrix<Complex, 17, 17> m;
    Eigen::Matrix<Complex, 17, 1> b;
    for (int i = 0; i < 17; ++i) {
      b(i) = Complex(n(rng), n(rng));
      for (int j = 0; j < 17; ++j) m(i, j) = Complex(n(rng), n(rng));
    }
    // Zero leading entry forces a pivot.
    m(0, 0) = 0.0;
    const Eigen::Matrix<Complex, 17, 1> ref = m.partialPivLu().solve(b);
    Eigen::Matrix<Complex, 17, 17> work = m;
    Eigen::Matrix<Complex, 17, 1> x = b;
    quad::detail::solve_in_place<17>(work, x);
    CHECK((x - ref).norm() <= 1e-11 * ref.norm());
    CHECK((m * x - b).norm() <= 1e-12 * b.norm() * m.norm());
  }
}
