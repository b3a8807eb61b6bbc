#include <cmath>
#include <functional>
#include <ostream>
#include <random>

#include "pool.hpp"
#include "udw/cli.hpp"
#include "udw/nonpert.hpp"

namespace udw::cli {

namespace {

Vec3d random_velocity(std::mt19937_64& rng, double max_speed) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vec3d dir = Vec3d(n(rng), n(rng), n(rng)).normalized();
  return max_speed * std::cbrt(u(rng)) * dir;
}

CheckResult null_covector() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3d v = random_velocity(rng, 0.999);
    const Vec3d k(u(rng), u(rng), u(rng));
    const NullCovector kt = ktilde(v, k);
    worst = std::max(worst, std::abs(kt.interval(1.0)) / k.squaredNorm());
  }
  const Vec3d k(0.3, -1.2, 2.0);
  const NullCovector rest = ktilde(Vec3d::Zero(), k);
  const bool exact = rest.k0 == -k.norm() && rest.k == k;
  return {"k-tilde is null (1000 pairs) and exact at rest", worst, 1e-12, worst <= 1e-12 && exact,
          exact ? "" : "rest limit not exact"};
}

CheckResult boost_jacobian() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  for (int i = 0; i < 100; ++i) {
    const FrameMap m = boost_map(random_velocity(rng, 0.99));
    const Event4d e = make_event(u(rng), Vec3d(u(rng), u(rng), u(rng)));
    worst_analytic = std::max(worst_analytic, std::abs(m.jacobian(e) - 1.0));
    worst_numeric = std::max(worst_numeric, std::abs(m.jacobian_numeric(e) - 1.0));
  }
  return {"boost Jacobian is one (100 boosts)", worst_analytic, 1e-12,
          worst_analytic <= 1e-12 && worst_numeric <= 1e-6,
          "finite difference " + format_double(worst_numeric) + " (limit 1e-6)"};
}

CheckResult conjugation() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  bool pass = true;
  for (int i = 0; i < 20; ++i) {
    const auto r = nonpert::conjugation_identities_check(u(rng));
    worst = std::max({worst, r.detector_deviation, r.mode_deviation});
    pass = pass && r.pass;
  }
  return {"interaction-picture identities (20 angles)", worst, 1e-12, pass, ""};
}

nonpert::SingleMode mode_for(const Worldline& w) {
  nonpert::SingleMode m;
  m.scenario.detector.gap = 1.0;
  m.scenario.switching = SwitchingProfile::gaussian(1.0);
  m.scenario.worldline = w;
  m.k = Vec3d(0.8, 0.3, 0.0);
  m.n_max = 6;
  return m;
}

CheckResult reparametrization() {
  const auto m = mode_for(Worldline::inertial(Vec3d(0.6, 0.0, 0.0)));
  const auto a = nonpert::evolve_extrapolated(m, 2.0, 8000, nonpert::TimeGrid::Proper);
  const auto b = nonpert::evolve_extrapolated(m, 2.0, 8000, nonpert::TimeGrid::Lab);
  const double d = nonpert::operator_norm(a - b);
  return {"proper-time and lab-time evolutions agree (v = 0.6)", d, 1e-8, d <= 1e-8, ""};
}

CheckResult perturbative_order() {
  const auto m = mode_for(Worldline::inertial(Vec3d(0.6, 0.0, 0.0)));
  const std::vector<double> lambdas{0.08, 0.04, 0.02};
  const auto r = nonpert::perturbative_consistency(m, lambdas, 1600);
  bool pass = true;
  std::string detail = "halving factors";
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < r.relative_deviation.size(); ++i) {
    const double f = r.relative_deviation[i] / r.relative_deviation[i + 1];
    pass = pass && f >= 3.0 && f <= 5.0;
    worst = std::max(worst, std::abs(f - 4.0));
    detail += " " + format_double(f);
  }
  return {"exact minus first order scales as lambda^2", worst, 1.0, pass, detail};
}

CheckResult dyson_matches_engine() {
  const auto m = mode_for(Worldline::inertial(Vec3d(0.3, 0.0, 0.0)));
  const double lambda = 0.5;
  const double p = std::norm(nonpert::dyson_first_order(m, lambda));
  const double kn = m.k.norm();
  const double u2 = 1.0 / (std::pow(2.0 * kPi, 3) * 2.0 * kn);
  const double engine = lambda * lambda * u2 * std::norm(mode_amplitude(m.scenario, m.k, Route::DetectorFrame));
  const double rel = std::abs(p - engine) / engine;
  return {"first-order amplitude matches the per-mode integrand", rel, 1e-9, rel <= 1e-9, ""};
}

CheckResult emission_dominance() {
  bool pass = true;
  double worst = 0.0;
  ResponseOptions o;
  o.rel_tol = 1e-8;
  for (double v : {0.0, 0.3, 0.6, 0.9}) {
    Scenario s;
    s.worldline = Worldline::inertial(Vec3d(v, 0.0, 0.0));
    for (double omega : {0.5, 1.0, 2.0}) {
      s.detector.gap = omega;
      const double up = probability(s, Route::InertialClosed, o).value;
      const double down = emission_probability(s, Route::InertialClosed, o).value;
      worst = std::max(worst, up / down);
      pass = pass && down >= up;
    }
  }
  return {"emission dominates excitation", worst, 1.0, pass, "largest excitation/emission ratio"};
}

}  // namespace

std::vector<CheckResult> verify_suite(int threads) {
  const std::vector<std::function<CheckResult()>> checks{
      null_covector, boost_jacobian,       conjugation,        reparametrization,
      perturbative_order, dyson_matches_engine, emission_dominance,
  };
  std::vector<CheckResult> out(checks.size());
  detail::parallel_for(checks.size(), threads, [&](std::size_t i) {
    try {
      out[i] = checks[i]();
    } catch (const Error& e) {
      out[i] = {"check " + std::to_string(i + 1), 0.0, 0.0, false, e.what()};
    }
  });
  return out;
}

void write_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
  std::size_t passed = 0;
  for (const CheckResult& c : checks) {
    out << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  measured " << format_double(c.measured) << " limit "
        << format_double(c.threshold);
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << '\n';
    passed += c.pass ? 1 : 0;
  }
  out << passed << "/" << checks.size() << " checks pass\n";
}

}  // namespace udw::cli
