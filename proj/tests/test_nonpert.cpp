#include <cmath>
#include <random>

#include "doctest.h"
#include "udw/nonpert.hpp"

using namespace udw;
using namespace udw::nonpert;

namespace {

// Matrix exponential by scaling and squaring of a Taylor series.
Matrix taylor_exp(const Matrix& A) {
  int squarings = 0;
  double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  const Matrix B = A / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(A.rows(), A.cols());
  Matrix sum = term;
  for (int n = 1; n < 30; ++n) {
    term = term * B / static_cast<double>(n);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

SingleMode gaussian_mode(const Worldline& w, double omega = 1.0) {
  SingleMode m;
  m.scenario.detector.gap = omega;
  m.scenario.switching = SwitchingProfile::gaussian(1.0);
  m.scenario.worldline = w;
  m.k = Vec3d(0.8, 0.3, 0.0);
  return m;
}

}  // namespace

TEST_CASE("two-level operators") {
  const Eigen::Matrix2cd P = excited_projector();
  CHECK(P(1, 1) == Complex(1.0));
  CHECK(P(0, 0) == Complex(0.0));
  CHECK((P * P - P).norm() == 0.0);
  CHECK(sigma_plus()(1, 0) == Complex(1.0));
  for (double tau : {-2.0, 0.0, 0.3, 5.0}) {
    const Eigen::Matrix2cd mu = monopole(1.7, tau);
    CHECK((mu - mu.adjoint()).norm() == 0.0);
  }
}

TEST_CASE("truncated mode ladder algebra") {
  FieldSpec f;
  const TruncatedMode mode(Vec3d(0.0, 2.0, 0.0), f, 6);
  CHECK(mode.size() == 7);
  CHECK(mode.frequency() == 2.0);
  CHECK(mode.commutator_defect() < 1e-14);
  CHECK(mode.free_hamiltonian()(0, 0) == Complex(0.0));
  CHECK(mode.free_hamiltonian()(3, 3) == Complex(6.0));
  CHECK(std::norm(mode.mode_function(Vec3d(1.0, 2.0, 3.0))) ==
        doctest::Approx(1.0 / (std::pow(2.0 * kPi, 3) * 4.0)));
  const Matrix phi = mode.field(0.7, Vec3d(0.1, -0.4, 2.0));
  CHECK((phi - phi.adjoint()).norm() < 1e-15);
  CHECK_THROWS_AS(TruncatedMode(Vec3d::Zero(), f, 6), Error);
}

TEST_CASE("conjugation identities against Taylor exponentials") {
  const auto zero = conjugation_identities_check(0.0);
  CHECK(zero.detector_deviation == 0.0);
  CHECK(zero.pass);
  CHECK(conjugation_identities_check(kPi).detector_deviation <= 1e-14);
  const auto r = conjugation_identities_check(0.7, 1e-12, 6);
  CHECK(r.mode_deviation <= 1e-12);

  // Independent oracle for the same identities.
  const Matrix P = excited_projector();
  const Matrix U = taylor_exp(Complex(0.0, kPi) * P);
  CHECK((U * sigma_plus() * U.adjoint() + Matrix(sigma_plus())).cwiseAbs().maxCoeff() <= 1e-14);
  FieldSpec f;
  const TruncatedMode mode(Vec3d::UnitX(), f, 6);
  const Matrix V = taylor_exp(Complex(0.0, 0.7) * mode.number());
  const Matrix lhs = V * mode.creation() * V.adjoint();
  const Matrix rhs = std::polar(1.0, 0.7) * mode.creation();
  CHECK((lhs - rhs).topLeftCorner(5, 5).cwiseAbs().maxCoeff() <= 1e-12);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 20; ++i) CHECK(conjugation_identities_check(u(rng)).pass);
}

TEST_CASE("hermitian exponential matches the Taylor oracle") {
  FieldSpec f;
  const TruncatedMode mode(Vec3d(0.5, 0.0, 0.0), f, 4);
  const Matrix H = mode.field(0.3, Vec3d(0.2, 0.0, 0.0)) * 3.0 + mode.free_hamiltonian();
  CHECK((hermitian_exp(H, 0.4) - taylor_exp(Complex(0.0, -0.4) * H)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("zero coupling evolves trivially") {
  const SingleMode m = gaussian_mode(Worldline::rest());
  const Matrix u = evolve(m, 0.0, 100, TimeGrid::Proper);
  CHECK((u - Matrix::Identity(u.rows(), u.cols())).norm() == 0.0);
  CHECK(dyson_first_order(m, 0.0) == Complex(0.0));
}

TEST_CASE("evolution is unitary and rejects coarse steps") {
  const SingleMode m = gaussian_mode(Worldline::inertial(Vec3d(0.6, 0.0, 0.0)));
  const Matrix u = evolve(m, 2.0, 800, TimeGrid::Proper);
  CHECK(unitarity_defect(u) <= 1e-10);
  try {
    evolve(m, 2.0, 20, TimeGrid::Proper);
    FAIL("expected StepTooCoarse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepTooCoarse);
  }
}

TEST_CASE("proper-time and lab-time evolutions agree") {
  for (const Worldline& w : {Worldline::inertial(Vec3d(0.6, 0.0, 0.0)),
                             Worldline::uniform_acceleration(0.5, Vec3d::UnitX())}) {
    const SingleMode m = gaussian_mode(w);
    const Matrix a = evolve_extrapolated(m, 2.0, 8000, TimeGrid::Proper);
    const Matrix b = evolve_extrapolated(m, 2.0, 8000, TimeGrid::Lab);
    CHECK(operator_norm(a - b) <= 1e-8);
    CHECK(unitarity_defect(a) <= 1e-10);
  }
}

TEST_CASE("first-order amplitude at rest") {
  const SingleMode m = gaussian_mode(Worldline::rest(), 1.0);
  const double lambda = 0.3;
  const Complex a = dyson_first_order(m, lambda);
  const double kn = m.k.norm();
  const double u2 = 1.0 / (std::pow(2.0 * kPi, 3) * 2.0 * kn);
  const double chi_bar = std::sqrt(2.0 * kPi) * std::exp(-0.5 * (1.0 + kn) * (1.0 + kn));
  CHECK(std::norm(a) == doctest::Approx(lambda * lambda * u2 * chi_bar * chi_bar).epsilon(1e-8));
  CHECK(std::norm(dyson_first_order(m, 2.0 * lambda)) == doctest::Approx(4.0 * std::norm(a)).epsilon(1e-14));

  // The same per-mode integrand the perturbative engine integrates over k.
  Scenario s = m.scenario;
  const Complex engine = mode_amplitude(s, m.k, Route::InertialClosed);
  CHECK(std::norm(a) == doctest::Approx(lambda * lambda * u2 * std::norm(engine)).epsilon(1e-10));
}

TEST_CASE("first-order amplitude matches the evolved matrix element") {
  const SingleMode m = gaussian_mode(Worldline::uniform_acceleration(0.5, Vec3d::UnitX()));
  const double lambda = 0.05;
  const Matrix u = evolve_extrapolated(m, lambda, 8000, TimeGrid::Proper);
  const int size = m.n_max + 1;
  const Complex exact = u(size + 1, 0);
  const Complex dyson = dyson_first_order(m, lambda);
  CHECK(std::abs(exact - dyson) <= 1e-3 * std::abs(dyson));
}

TEST_CASE("perturbative consistency scales as lambda squared") {
  const SingleMode m = gaussian_mode(Worldline::rest());
  const std::vector<double> lambdas{2.0, 1.0, 0.5, 0.25};
  const auto r = perturbative_consistency(m, lambdas, 1600);
  CHECK(r.p_exact.front() < 0.1);
  CHECK(r.pass);
  CHECK(r.slope >= 1.7);
  CHECK(r.slope <= 2.3);
  for (std::size_t i = 0; i + 1 < r.lambdas.size(); ++i) {
    const double factor = r.relative_deviation[i] / r.relative_deviation[i + 1];
    CHECK(factor >= 3.0);
    CHECK(factor <= 5.0);
  }
  const std::vector<double> narrow{1.0, 1.2};
  CHECK_THROWS_AS(perturbative_consistency(m, narrow, 100), Error);
}

TEST_CASE("Fock truncation is converged at weak coupling") {
  SingleMode small = gaussian_mode(Worldline::rest());
  small.n_max = 2;
  SingleMode large = small;
  large.n_max = 6;
  const double a = excitation_probability(evolve_extrapolated(small, 1.0, 800, TimeGrid::Proper), 2);
  const double b = excitation_probability(evolve_extrapolated(large, 1.0, 800, TimeGrid::Proper), 6);
  CHECK(std::abs(a - b) <= 1e-6);
}
