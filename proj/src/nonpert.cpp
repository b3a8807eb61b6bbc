#include "udw/nonpert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "udw/quadrature.hpp"

namespace udw::nonpert {

Eigen::Matrix2cd sigma_plus() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1.0;
  return m;
}

Eigen::Matrix2cd sigma_minus() { return sigma_plus().adjoint(); }

Eigen::Matrix2cd excited_projector() { return sigma_plus() * sigma_minus(); }

Eigen::Matrix2cd monopole(double gap, double tau) {
  const Complex phase = std::polar(1.0, gap * tau);
  return sigma_plus() * phase + sigma_minus() * std::conj(phase);
}

Matrix hermitian_exp(const Matrix& G, double h) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  const Eigen::VectorXcd phases =
      (-Complex(0.0, h) * es.eigenvalues().cast<Complex>()).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

double unitarity_defect(const Matrix& u) {
  return operator_norm(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
}

TruncatedMode::TruncatedMode(const Vec3d& k, const FieldSpec& field, int n_max)
    : k_(k), dimension_(field.dimension), c_(field.c), omega_(field.c * k.norm()), n_max_(n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "Fock cutoff must be at least 1");
  if (k.norm() == 0.0) throw Error(ErrorKind::ZeroMode, "single-mode field needs k != 0");
  for (int i = field.dimension; i < 3; ++i) {
    if (k(i) != 0.0) throw Error(ErrorKind::InvalidArgument, "mode wavevector outside the field dimensions");
  }
}

Matrix TruncatedMode::annihilation() const {
  Matrix a = Matrix::Zero(size(), size());
  for (int n = 1; n <= n_max_; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix TruncatedMode::creation() const { return annihilation().adjoint(); }

Matrix TruncatedMode::number() const {
  Matrix m = Matrix::Zero(size(), size());
  for (int n = 0; n <= n_max_; ++n) m(n, n) = static_cast<double>(n);
  return m;
}

Matrix TruncatedMode::free_hamiltonian() const { return omega_ * number(); }

Complex TruncatedMode::mode_function(const Vec3d& x) const {
  const double norm = std::sqrt(std::pow(2.0 * kPi, dimension_) * 2.0 * omega_ / c_);
  return std::polar(1.0 / norm, -k_.dot(x));
}

Matrix TruncatedMode::field(double t, const Vec3d& x) const {
  const Complex u = mode_function(x) * std::polar(1.0, omega_ * t);
  return u * creation() + std::conj(u) * annihilation();
}

double TruncatedMode::commutator_defect() const {
  const Matrix a = annihilation();
  const Matrix comm = a * creation() - creation() * a;
  const Matrix block = comm.topLeftCorner(n_max_, n_max_) - Matrix::Identity(n_max_, n_max_);
  return block.cwiseAbs().maxCoeff();
}

ConjugationReport conjugation_identities_check(double theta, double tol, int n_max) {
  ConjugationReport r;
  r.theta = theta;
  const Complex phase = std::polar(1.0, theta);

  const Matrix P = excited_projector();
  const Matrix sp = sigma_plus();
  const Matrix Ud = hermitian_exp(P, -theta);  // exp(i theta P)
  r.detector_deviation = (Ud * sp * Ud.adjoint() - phase * sp).cwiseAbs().maxCoeff();

  FieldSpec field;
  const TruncatedMode mode(Vec3d::UnitX(), field, n_max);
  const Matrix Um = hermitian_exp(mode.number(), -theta);
  const Matrix ad = mode.creation();
  const int keep = std::max(1, n_max - 1);
  r.mode_deviation = (Um * ad * Um.adjoint() - phase * ad).topLeftCorner(keep, keep).cwiseAbs().maxCoeff();

  const Eigen::Matrix2cd mu = monopole(1.0, theta);
  r.hermiticity_defect = (mu - mu.adjoint()).cwiseAbs().maxCoeff();
  r.pass = r.detector_deviation <= tol && r.mode_deviation <= tol && r.hermiticity_defect <= tol;
  return r;
}

namespace {

constexpr double kWindowThreshold = 1e-12;
constexpr double kMaxStepPhase = 0.1;

void require_single_mode(const SingleMode& m) {
  m.scenario.validate();
  if (!m.scenario.smearing.is_pointlike()) {
    throw Error(ErrorKind::NotPointlike, "the single-mode model is for pointlike detectors");
  }
}

// Switching seen along the worldline at proper time tau and lab time t.
double switching_at(const Scenario& s, double tau, double t) {
  return s.switching_frame == SwitchingFrame::Lab ? s.switching(t) : s.switching(tau);
}

}  // namespace

std::pair<double, double> SingleMode::proper_window() const {
  const auto [lo, hi] = scenario.switching.support(kWindowThreshold);
  if (scenario.switching_frame == SwitchingFrame::Detector) return {lo, hi};
  const Worldline& w = scenario.worldline;
  const double epoch = w.default_epoch();
  return {w.proper_time(lo, epoch), w.proper_time(hi, epoch)};
}

std::pair<double, double> SingleMode::lab_window() const {
  const auto [lo, hi] = scenario.switching.support(kWindowThreshold);
  if (scenario.switching_frame == SwitchingFrame::Lab) return {lo, hi};
  const Worldline& w = scenario.worldline;
  const double epoch = w.default_epoch();
  return {w.coordinate_time(lo, epoch), w.coordinate_time(hi, epoch)};
}

Matrix evolve(const SingleMode& m, double lambda, int steps, TimeGrid grid) {
  require_single_mode(m);
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "need at least one step");
  const Scenario& s = m.scenario;
  const Worldline& w = s.worldline;
  const double epoch = w.default_epoch();
  const TruncatedMode mode(m.k, s.field, m.n_max);
  const double c = s.field.c;
  const double omega = mode.frequency();
  const double gap = s.detector.gap;
  const int dim = 2 * mode.size();
  // ||phi|| <= 2 |u| sqrt(n_max).
  const double field_bound = 2.0 * std::abs(mode.mode_function(Vec3d::Zero())) * std::sqrt(double(m.n_max));

  const auto [lo, hi] = grid == TimeGrid::Proper ? m.proper_window() : m.lab_window();
  const double h = (hi - lo) / steps;
  Matrix u = Matrix::Identity(dim, dim);
  if (lambda == 0.0) return u;
  for (int j = 0; j < steps; ++j) {
    const double mid = lo + (j + 0.5) * h;
    double tau, t, gamma;
    Vec3d x, v;
    if (grid == TimeGrid::Proper) {
      const auto p = w.at_proper_time(mid, epoch);
      tau = mid;
      t = p.t;
      x = p.x;
      v = p.v;
      gamma = p.gamma;
    } else {
      t = mid;
      tau = w.proper_time(t, epoch);
      x = w.position(t);
      v = w.velocity(t);
      gamma = w.lorentz_factor(t);
    }
    // dtau/ds: 1 on the proper-time grid, the redshift 1/gamma on the lab grid.
    const double redshift = grid == TimeGrid::Proper ? 1.0 : 1.0 / gamma;
    const double field_rate = (omega - m.k.dot(v)) * (grid == TimeGrid::Proper ? gamma : 1.0);
    const double coefficient = c * lambda * switching_at(s, tau, t) * redshift;
    const double phase = h * (std::abs(gap) * redshift + std::abs(field_rate) + std::abs(coefficient) * field_bound);
    if (phase > kMaxStepPhase) {
      std::ostringstream os;
      os << "step turns the phase by " << phase << " rad (limit " << kMaxStepPhase << "); use more than "
         << static_cast<long>(std::ceil(steps * phase / kMaxStepPhase)) << " steps";
      throw Error(ErrorKind::StepTooCoarse, os.str());
    }
    if (coefficient == 0.0) continue;
    const Matrix mu = monopole(gap, tau);
    const Matrix phi = mode.field(t, x);
    Matrix H(dim, dim);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        H.block(a * mode.size(), b * mode.size(), mode.size(), mode.size()) = coefficient * mu(a, b) * phi;
      }
    }
    u = hermitian_exp(H, h) * u;
  }
  return u;
}

Matrix evolve_extrapolated(const SingleMode& m, double lambda, int steps, TimeGrid grid) {
  const Matrix coarse = evolve(m, lambda, steps, grid);
  const Matrix fine = evolve(m, lambda, 2 * steps, grid);
  return (4.0 * fine - coarse) / 3.0;
}

double excitation_probability(const Matrix& u, int n_max) {
  const int size = n_max + 1;
  double p = 0.0;
  for (int n = 0; n < size; ++n) p += std::norm(u(size + n, 0));
  return p;
}

Complex dyson_first_order(const SingleMode& m, double lambda) {
  require_single_mode(m);
  if (lambda == 0.0) return Complex{};
  const Scenario& s = m.scenario;
  const Worldline& w = s.worldline;
  const double epoch = w.default_epoch();
  const TruncatedMode mode(m.k, s.field, m.n_max);
  const double omega = mode.frequency();
  const double gap = s.detector.gap;
  const auto [lo, hi] = m.proper_window();

  double cached = std::numeric_limits<double>::quiet_NaN();
  Worldline::Sample sample;
  auto at = [&](double tau) -> const Worldline::Sample& {
    if (tau != cached) {
      sample = w.at_proper_time(tau, epoch);
      cached = tau;
    }
    return sample;
  };
  auto amp = [&](double tau) { return Complex(switching_at(s, tau, at(tau).t), 0.0); };
  auto phase = [&](double tau) {
    const auto& p = at(tau);
    return gap * tau + omega * p.t - m.k.dot(p.x);
  };
  auto dphase = [&](double tau) {
    const auto& p = at(tau);
    return gap + p.gamma * (omega - m.k.dot(p.v));
  };
  quad::Tolerance tol;
  tol.rel = 1e-12;
  tol.abs = 1e-16 * s.switching.area();
  const auto bp = quad::uniform_breakpoints(lo, hi, 8);
  const auto est = quad::integrate_oscillatory(amp, phase, dphase, std::span<const double>(bp), tol);
  if (!est.converged) throw Error(ErrorKind::QuadratureFailure, "first-order amplitude did not converge");
  const double norm = std::abs(mode.mode_function(Vec3d::Zero()));
  return Complex(0.0, -1.0) * s.field.c * lambda * norm * est.value;
}

ConsistencyReport perturbative_consistency(const SingleMode& m, std::span<const double> lambdas, int steps) {
  ConsistencyReport r;
  std::vector<double> sorted(lambdas.begin(), lambdas.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() < 3 || !(sorted.front() > 0.0) || sorted.back() < 2.0 * sorted.front()) {
    throw Error(ErrorKind::FitFailure, "coupling sweep needs three distinct positive values spanning a factor of 2");
  }
  const Complex unit = dyson_first_order(m, 1.0);
  for (double lambda : lambdas) {
    const Matrix u = evolve_extrapolated(m, lambda, steps, TimeGrid::Proper);
    const double exact = excitation_probability(u, m.n_max);
    const double dyson = lambda * lambda * std::norm(unit);
    r.lambdas.push_back(lambda);
    r.p_exact.push_back(exact);
    r.p_dyson.push_back(dyson);
    r.relative_deviation.push_back(std::abs(exact - dyson) / dyson);
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(r.lambdas.size());
  for (std::size_t i = 0; i < r.lambdas.size(); ++i) {
    if (!(r.relative_deviation[i] > 0.0) || !std::isfinite(r.relative_deviation[i])) {
      throw Error(ErrorKind::FitFailure, "relative deviation vanished; the sweep does not resolve the next order");
    }
    const double x = std::log(r.lambdas[i]);
    const double y = std::log(r.relative_deviation[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  r.pass = r.slope >= 1.7 && r.slope <= 2.3;
  return r;
}

}  // namespace udw::nonpert
