#include <cmath>
#include <random>

#include "doctest.h"
#include "udw/frames.hpp"
#include "udw/kinematics.hpp"
#include "udw/quadrature.hpp"

using namespace udw;

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Golub-Welsch.
struct GaussLegendre {
  Eigen::VectorXd x, w;
  explicit GaussLegendre(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
      const double b = k / std::sqrt(4.0 * k * k - 1.0);
      J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x = es.eigenvalues();
    w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  }
};

// Composite tensor-product Gauss rule over a box; dims beyond 1 + n are
// pinned at zero.
template <typename F>
double box_integral(F&& f, const Eigen::Vector4d& lo, const Eigen::Vector4d& hi, int n,
                    const Eigen::Vector4i& panels) {
  const GaussLegendre gl(16);
  std::vector<double> nodes[4], weights[4];
  for (int a = 0; a < 4; ++a) {
    if (a > n) {
      nodes[a] = {0.0};
      weights[a] = {1.0};
      continue;
    }
    const double width = (hi(a) - lo(a)) / panels(a);
    for (int p = 0; p < panels(a); ++p) {
      const double mid = lo(a) + (p + 0.5) * width;
      for (int q = 0; q < gl.x.size(); ++q) {
        nodes[a].push_back(mid + 0.5 * width * gl.x(q));
        weights[a].push_back(0.5 * width * gl.w(q));
      }
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < nodes[0].size(); ++i)
    for (std::size_t j = 0; j < nodes[1].size(); ++j)
      for (std::size_t k = 0; k < nodes[2].size(); ++k)
        for (std::size_t l = 0; l < nodes[3].size(); ++l) {
          const Event4d e(nodes[0][i], nodes[1][j], nodes[2][k], nodes[3][l]);
          total += weights[0][i] * weights[1][j] * weights[2][k] * weights[3][l] * f(e);
        }
  return total;
}

Event4d random_event(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Event4d(u(rng), u(rng), u(rng), u(rng));
}

Vec3d random_velocity(std::mt19937_64& rng, double max_speed) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> s(0.0, max_speed);
  Vec3d dir(u(rng), u(rng), u(rng));
  return s(rng) * dir.normalized();
}

}  // namespace

TEST_CASE("boost map basics") {
  CHECK(boost_map(Vec3d::Zero()).kind() == FrameMap::Kind::Identity);
  const auto m = boost_map(Vec3d(0.6, 0.0, 0.0));
  const Event4d d = m.inverse(Event4d(1.0, 0.6, 0.0, 0.0));
  CHECK(d(0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(spatial(d).norm() < 1e-15);

  // Oracle: explicit boost matrix acting on (c t, x).
  const Eigen::Matrix4d L = boost_matrix<double>(Vec3d(0.6, 0.0, 0.0), 1.0);
  const Event4d back = L.inverse() * Event4d(1.0, 0.6, 0.0, 0.0);
  CHECK((back - d).norm() < 1e-14);

  try {
    boost_map(Vec3d(0.0, 1.0, 0.0));
    FAIL("expected SuperluminalBoost");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SuperluminalBoost);
  }
}

TEST_CASE("boost maps invert exactly and have unit Jacobian") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const double c = i % 2 ? 1.0 : 2.5;
    const auto m = boost_map(random_velocity(rng, 0.99 * c), c);
    const Event4d e = random_event(rng, 10.0);
    CHECK((m.forward(m.inverse(e)) - e).cwiseAbs().maxCoeff() <= 1e-10 * (1 + e.norm()));
    CHECK((m.inverse(m.forward(e)) - e).cwiseAbs().maxCoeff() <= 1e-10 * (1 + e.norm()));
    CHECK(std::abs(jacobian_det(m, e) - 1.0) <= 1e-12);
    CHECK(std::abs(m.jacobian_numeric(e) - 1.0) <= 1e-6);
  }
}

TEST_CASE("comoving map of hyperbolic motion is the Rindler chart") {
  const double a = 0.05;
  const auto w = Worldline::uniform_acceleration(a, Vec3d::UnitX());
  const auto m = FrameMap::comoving(w, 1.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Event4d d(3.0 * u(rng), 1.5 * u(rng), 1.0 * u(rng), 1.0 * u(rng));
    const Event4d e = m.forward(d);
    CHECK((m.inverse(e) - d).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(m.jacobian(e) == doctest::Approx(1.0 / (1.0 + a * d(1))).epsilon(1e-12));
    CHECK(m.jacobian_numeric(e) == doctest::Approx(m.jacobian(e)).epsilon(1e-6));
    CHECK(m.jacobian(e) > 0.0);
  }
  // Origin of the comoving frame rides on the worldline.
  const Event4d on = m.forward(Event4d(0.7, 0.0, 0.0, 0.0));
  CHECK((spatial(on) - w.position(on(0))).norm() < 1e-12);
  CHECK(on(0) == doctest::Approx(w.coordinate_time(0.7)).epsilon(1e-14));
}

TEST_CASE("comoving map enforces rigidity") {
  const auto w = Worldline::uniform_acceleration(1.0, Vec3d::UnitX());
  try {
    FrameMap::comoving(w, 0.2);
    FAIL("expected MapNotInvertibleOnSupport");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MapNotInvertibleOnSupport);
  }
  CHECK_NOTHROW(FrameMap::comoving(w, 0.05));
}

TEST_CASE("comoving map of inertial and tabulated worldlines") {
  const Vec3d v(0.3, -0.2, 0.4);
  const auto mi = FrameMap::comoving(Worldline::inertial(v), 1.0);
  const auto mb = boost_map(v);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const Event4d e = random_event(rng, 4.0);
    CHECK((mi.inverse(e) - mb.inverse(e)).norm() < 1e-12);
    CHECK((mi.forward(e) - mb.forward(e)).norm() < 1e-12);
  }

  // A finely sampled hyperbola against the exact Rindler chart.
  const double a = 0.05;
  std::vector<double> ts;
  std::vector<Vec3d> xs;
  for (int i = 0; i <= 800; ++i) {
    const double t = -6.0 + 12.0 * i / 800;
    ts.push_back(t);
    xs.push_back(Vec3d((std::sqrt(1 + a * a * t * t) - 1) / a, 0.0, 0.0));
  }
  const auto mt = FrameMap::comoving(Worldline::tabulated(ts, xs), 1.0);
  const auto mr = FrameMap::comoving(Worldline::uniform_acceleration(a, Vec3d::UnitX()), 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Event4d d(4.0 * u(rng), u(rng), u(rng), u(rng));
    const Event4d e = mr.forward(d);
    CHECK((mt.forward(d) - e).norm() < 1e-6);
    CHECK((mt.inverse(e) - d).norm() < 1e-6);
    CHECK((mt.forward(mt.inverse(e)) - e).norm() < 1e-10);
    CHECK(mt.jacobian(e) == doctest::Approx(mr.jacobian(e)).epsilon(1e-5));
  }
}

TEST_CASE("pointlike reparametrization to lab time") {
  const DetectorSpec det{1.0, 0.3};
  const auto chi = SwitchingProfile::gaussian(1.0, 0.4);
  const auto point = SmearingProfile::pointlike();

  const auto rest = Worldline::rest();
  const auto h0 = detector_density(det, chi, point, FrameMap::identity(), 3);
  const auto h0t = reparametrize_hamiltonian(h0, rest);
  CHECK(h0t.chart() == Chart::Lab);
  for (double t : {-2.0, 0.0, 1.3}) {
    CHECK(h0t.coefficient(t) == doctest::Approx(h0.coefficient(t)).epsilon(1e-15));
    CHECK(h0t.monopole_time(t) == doctest::Approx(t));
  }

  const Vec3d v(0.6, 0.0, 0.0);
  const auto w = Worldline::inertial(v);
  const auto h = detector_density(det, chi, point, boost_map(v), 3);
  const auto ht = reparametrize_hamiltonian(h, w);
  const double gamma = 1.25;
  for (double t : {-3.0, -0.5, 0.0, 0.9, 2.2}) {
    CHECK(ht.coefficient(t) == doctest::Approx(det.coupling * chi(t / gamma) / gamma).epsilon(1e-14));
    CHECK(ht.monopole_time(t) == doctest::Approx(t / gamma).epsilon(1e-14));
    CHECK((spatial(ht.field_event(t)) - v * t).norm() < 1e-14);
    CHECK(ht.field_event(t)(0) == doctest::Approx(t));
  }

  quad::Tolerance tol;
  tol.rel = 1e-12;
  const auto acc = Worldline::uniform_acceleration(0.8, Vec3d::UnitY());
  const auto ha = reparametrize_hamiltonian(detector_density(det, chi, point, FrameMap::comoving(acc, 0.0), 3), acc);
  const double tau_integral =
      quad::integrate_adaptive<double>([&](double tau) { return h.coefficient(tau); }, -12.0, 12.0, tol).value;
  for (const auto* lab : {&ht, &ha}) {
    const double t_integral =
        quad::integrate_adaptive<double>([&](double t) { return lab->coefficient(t); }, -4000.0, 4000.0, tol).value;
    CHECK(t_integral == doctest::Approx(tau_integral).epsilon(1e-9));
  }

  const auto smeared = detector_density(det, chi, SmearingProfile::gaussian_ball(0.1), FrameMap::identity(), 3);
  try {
    reparametrize_hamiltonian(smeared, rest);
    FAIL("expected NotPointlike");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPointlike);
  }
}

TEST_CASE("transform_density with identity and boost maps") {
  const DetectorSpec det{1.0, 1.0};
  const auto chi = SwitchingProfile::gaussian(1.0);
  const auto f = SmearingProfile::gaussian_ball(0.5);
  const auto h = detector_density(det, chi, f, FrameMap::identity(), 3);
  const auto hi = transform_density(h, FrameMap::identity());
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Event4d e = random_event(rng, 2.0);
    CHECK(hi.coefficient(e) == h.coefficient(e));
  }

  const double vx = 0.6, gamma = 1.25;
  const auto m = boost_map(Vec3d(vx, 0, 0));
  const auto hb = transform_density(detector_density(det, chi, f, m, 3), m);
  for (int i = 0; i < 20; ++i) {
    const Event4d e = random_event(rng, 2.0);
    const double t = e(0), x = e(1);
    const Vec3d xi(gamma * (x - vx * t), e(2), e(3));
    const double expected = chi(gamma * (t - x * vx)) * f.density(xi, 3);
    CHECK(hb.coefficient(e) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(hb.monopole_time(e) == doctest::Approx(gamma * (t - x * vx)).epsilon(1e-12));
    CHECK((hb.field_event(e) - e).norm() < 1e-12);
  }

  // Pointlike: the lab-time line density carries the redshift factor.
  const auto hp = transform_density(detector_density(det, chi, SmearingProfile::pointlike(), m, 3), m);
  CHECK(hp.coefficient(0.7) == doctest::Approx(chi(0.7 / gamma) / gamma).epsilon(1e-14));
}

TEST_CASE("transforming twice restores the coefficients") {
  const DetectorSpec det{1.0, 0.5};
  const auto chi = SwitchingProfile::gaussian(1.0);
  const auto f = SmearingProfile::exponential(0.2);
  const auto w = Worldline::uniform_acceleration(0.1, Vec3d(0, 0, 1));
  const auto m = FrameMap::comoving(w, 0.9);
  const auto h = detector_density(det, chi, f, m, 3);
  const auto back = transform_density(transform_density(h, m), m);
  for (double tau = -2.0; tau <= 2.0; tau += 0.5) {
    for (double z = -0.5; z <= 0.5; z += 0.25) {
      const Event4d d(tau, 0.1, -0.2, z);
      CHECK(back.coefficient(d) == doctest::Approx(h.coefficient(d)).epsilon(1e-9));
      CHECK(back.monopole_time(d) == doctest::Approx(tau).epsilon(1e-9));
    }
  }
  const auto lab = lab_switched_density(det, chi, f, m, 3);
  const auto lab_back = transform_density(transform_density(lab, m), m);
  for (double t = -2.0; t <= 2.0; t += 0.5) {
    const Event4d e(t, 0.1, 0.0, 0.3);
    CHECK(lab_back.coefficient(e) == doctest::Approx(lab.coefficient(e)).epsilon(1e-9));
  }
}

TEST_CASE("lab-switched densities") {
  const DetectorSpec det{1.0, 1.0};
  const auto chi = SwitchingProfile::gaussian(1.0);
  const auto f = SmearingProfile::gaussian_ball(0.5);
  // Without motion the two switching prescriptions coincide.
  const auto a = lab_switched_density(det, chi, f, boost_map(Vec3d::Zero()), 3);
  const auto b = transform_density(detector_density(det, chi, f, FrameMap::identity(), 3), FrameMap::identity());
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const Event4d e = random_event(rng, 2.0);
    CHECK(a.coefficient(e) == doctest::Approx(b.coefficient(e)).epsilon(1e-15));
  }
  // Pointlike in a boosted frame: no dilation of the switching argument.
  const auto p = lab_switched_density(det, chi, SmearingProfile::pointlike(), boost_map(Vec3d(0.0, 0.8, 0.0)), 3);
  for (double t : {-1.0, 0.0, 2.0}) {
    CHECK(p.coefficient(t) == doctest::Approx(chi(t) * 0.6).epsilon(1e-14));
    CHECK(p.monopole_time(t) == doctest::Approx(0.6 * t).epsilon(1e-14));
  }
}

TEST_CASE("spacetime integrals are frame independent") {
  const DetectorSpec det{1.0, 1.0};
  const auto chi = SwitchingProfile::gaussian(1.0);
  const auto f = SmearingProfile::gaussian_ball(0.5);
  const auto m = boost_map(Vec3d(0.6, 0.0, 0.0));
  const double exact = std::sqrt(2.0 * kPi);

  // Detector-switched: detector chart vs lab chart.
  const auto hd = detector_density(det, chi, f, m, 3);
  const auto hl = transform_density(hd, m);
  const Eigen::Vector4d dlo(-7.5, -3.75, -3.75, -3.75), dhi(7.5, 3.75, 3.75, 3.75);
  const Eigen::Vector4d llo(-12.0, -10.5, -3.75, -3.75), lhi(12.0, 10.5, 3.75, 3.75);
  const Eigen::Vector4i dp(3, 2, 2, 2), lp(6, 5, 2, 2);
  const double det_chart = box_integral([&](const Event4d& e) { return hd.coefficient(e); }, dlo, dhi, 3, dp);
  const double lab_chart = box_integral([&](const Event4d& e) { return hl.coefficient(e); }, llo, lhi, 3, lp);
  CHECK(det_chart == doctest::Approx(exact).epsilon(1e-8));
  CHECK(lab_chart == doctest::Approx(det_chart).epsilon(1e-8));

  // Lab-switched: lab chart vs its detector-chart pull-back. The switching
  // window now has width 1 in lab time, so the comoving extent grows.
  const auto sl = lab_switched_density(det, chi, f, m, 3);
  const auto sd = transform_density(sl, m);
  const double s_lab = box_integral([&](const Event4d& e) { return sl.coefficient(e); }, llo, lhi, 3, lp);
  const double s_det = box_integral([&](const Event4d& e) { return sd.coefficient(e); },
                                    Eigen::Vector4d(-8.0, -3.75, -3.75, -3.75),
                                    Eigen::Vector4d(8.0, 3.75, 3.75, 3.75), 3, dp);
  CHECK(s_lab == doctest::Approx(exact / 1.25).epsilon(1e-8));
  CHECK(s_det == doctest::Approx(s_lab).epsilon(1e-8));

  // Accelerated comoving chart in 1 + 1 dimensions.
  const auto chi2 = SwitchingProfile::gaussian(0.5);
  const auto f2 = SmearingProfile::gaussian_ball(0.1);
  const auto acc = Worldline::uniform_acceleration(0.1, Vec3d::UnitX());
  const auto ma = FrameMap::comoving(acc, f2.support_radius());
  const auto ad = detector_density(det, chi2, f2, ma, 1);
  const auto al = transform_density(ad, ma);
  const double ad_int = box_integral([&](const Event4d& e) { return ad.coefficient(e); },
                                     Eigen::Vector4d(-5, -1, 0, 0), Eigen::Vector4d(5, 1, 0, 0), 1, Eigen::Vector4i(16, 16, 1, 1));
  const double al_int = box_integral([&](const Event4d& e) { return al.coefficient(e); },
                                     Eigen::Vector4d(-5, -1.5, 0, 0), Eigen::Vector4d(5, 2.5, 0, 0), 1, Eigen::Vector4i(40, 40, 1, 1));
  CHECK(ad_int == doctest::Approx(std::sqrt(2.0 * kPi) * 0.5).epsilon(1e-8));
  CHECK(al_int == doctest::Approx(ad_int).epsilon(1e-8));
}
