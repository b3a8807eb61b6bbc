#include "udw/profiles.hpp"

#include <cmath>
#include <sstream>

#include "udw/quadrature.hpp"

namespace udw {
namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive and finite");
  }
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// pi^2 cos(x/2) / (pi^2 - x^2), continued through x = +-pi.
double raised_cosine_kernel(double x) {
  const double e = std::abs(x) - kPi;
  if (std::abs(e) < 0.1) {
    if (e == 0.0) return kPi / 4.0;
    return kPi * kPi * std::sin(0.5 * e) / (e * (2.0 * kPi + e));
  }
  return kPi * kPi * std::cos(0.5 * x) / (kPi * kPi - x * x);
}

double bump(double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

}  // namespace

SwitchingProfile SwitchingProfile::gaussian(double width, double center) {
  require_positive(width, "switching width");
  return SwitchingProfile(Kind::Gaussian, width, 0.0, center);
}

SwitchingProfile SwitchingProfile::cosine_ramp(double plateau, double ramp, double center) {
  if (!(plateau >= 0.0)) throw Error(ErrorKind::InvalidArgument, "plateau must be >= 0");
  require_positive(ramp, "ramp length");
  return SwitchingProfile(Kind::CosineRamp, plateau, ramp, center);
}

SwitchingProfile SwitchingProfile::compact_bump(double start, double end) {
  if (!(end > start)) throw Error(ErrorKind::InvalidArgument, "bump support must satisfy start < end");
  return SwitchingProfile(Kind::CompactBump, start, end, 0.5 * (start + end));
}

double SwitchingProfile::value(double tau) const {
  switch (kind_) {
    case Kind::Gaussian: {
      const double s = (tau - center_) / p1_;
      return std::exp(-0.5 * s * s);
    }
    case Kind::CosineRamp: {
      const double d = std::abs(tau - center_) - 0.5 * p1_;
      if (d <= 0.0) return 1.0;
      if (d >= p2_) return 0.0;
      const double c = std::cos(0.5 * kPi * d / p2_);
      return c * c;
    }
    case Kind::CompactBump:
      return bump((2.0 * tau - p1_ - p2_) / (p2_ - p1_));
  }
  return 0.0;
}

Complex SwitchingProfile::fourier(double omega) const {
  switch (kind_) {
    case Kind::Gaussian: {
      const double mag = std::sqrt(2.0 * kPi) * p1_ * std::exp(-0.5 * p1_ * p1_ * omega * omega);
      return center_ == 0.0 ? Complex(mag, 0.0) : std::polar(mag, omega * center_);
    }
    case Kind::CosineRamp: {
      // rect of length plateau + ramp convolved with a half-cosine kernel of width ramp.
      const double length = p1_ + p2_;
      const double mag = length * sinc(0.5 * omega * length) * raised_cosine_kernel(omega * p2_);
      return center_ == 0.0 ? Complex(mag, 0.0) : mag * std::polar(1.0, omega * center_);
    }
    case Kind::CompactBump:
      return fourier_numeric(omega);
  }
  return {};
}

Complex SwitchingProfile::fourier_numeric(double omega, double rel_tol) const {
  const auto [lo, hi] = support();
  std::vector<double> bp{lo};
  for (double k : kinks()) bp.push_back(k);
  bp.push_back(hi);
  // A few initial panels per unit width keep the first estimates honest.
  std::vector<double> refined;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const auto sub = quad::uniform_breakpoints(bp[i], bp[i + 1], 8);
    refined.insert(refined.end(), sub.begin(), sub.end() - 1);
  }
  refined.push_back(bp.back());
  quad::Tolerance tol;
  tol.rel = rel_tol;
  tol.abs = 1e-3 * rel_tol * area();
  tol.max_intervals = 20000;
  const auto est = quad::integrate_oscillatory(
      [this](double t) { return Complex(value(t), 0.0); }, [omega](double t) { return omega * t; },
      [omega](double) { return omega; }, std::span<const double>(refined), tol);
  if (!est.converged) {
    throw Error(ErrorKind::QuadratureFailure, "switching transform did not converge");
  }
  return est.value;
}

std::pair<double, double> SwitchingProfile::support(double threshold) const {
  switch (kind_) {
    case Kind::Gaussian: {
      const double r = p1_ * std::sqrt(2.0 * std::log(1.0 / threshold));
      return {center_ - r, center_ + r};
    }
    case Kind::CosineRamp: {
      const double r = 0.5 * p1_ + p2_;
      return {center_ - r, center_ + r};
    }
    case Kind::CompactBump:
      return {p1_, p2_};
  }
  return {0.0, 0.0};
}

std::vector<double> SwitchingProfile::kinks() const {
  if (kind_ == Kind::CosineRamp && p1_ > 0.0) {
    return {center_ - 0.5 * p1_, center_ + 0.5 * p1_};
  }
  return {};
}

double SwitchingProfile::bandwidth() const {
  switch (kind_) {
    case Kind::Gaussian:
      return 12.0 / p1_;
    case Kind::CosineRamp:
      return 12.0 / p2_;
    case Kind::CompactBump:
      return 1300.0 / (p2_ - p1_);
  }
  return 0.0;
}

double SwitchingProfile::area() const {
  switch (kind_) {
    case Kind::Gaussian:
      return std::sqrt(2.0 * kPi) * p1_;
    case Kind::CosineRamp:
      return p1_ + p2_;
    case Kind::CompactBump: {
      quad::Tolerance tol;
      tol.rel = 1e-14;
      const auto est = quad::integrate_adaptive<double>([](double u) { return bump(u); }, -1.0, 1.0, tol);
      return 0.5 * (p2_ - p1_) * est.value;
    }
  }
  return 0.0;
}

std::string SwitchingProfile::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Gaussian:
      os << "gaussian(width=" << p1_ << ", center=" << center_ << ")";
      break;
    case Kind::CosineRamp:
      os << "cosine_ramp(plateau=" << p1_ << ", ramp=" << p2_ << ", center=" << center_ << ")";
      break;
    case Kind::CompactBump:
      os << "compact_bump(" << p1_ << ", " << p2_ << ")";
      break;
  }
  return os.str();
}

SmearingProfile SmearingProfile::pointlike() { return SmearingProfile(Kind::Pointlike, 0.0); }

SmearingProfile SmearingProfile::gaussian_ball(double width) {
  require_positive(width, "smearing width");
  return SmearingProfile(Kind::GaussianBall, width);
}

SmearingProfile SmearingProfile::exponential(double scale) {
  require_positive(scale, "smearing scale");
  return SmearingProfile(Kind::ExponentialAtomLike, scale);
}

namespace {

// int d^n xi exp(-|xi|/a0) = a0^n * (surface of S^{n-1}) * (n-1)!
double exponential_norm(double a0, int n) {
  switch (n) {
    case 1: return 2.0 * a0;
    case 2: return 2.0 * kPi * a0 * a0;
    case 3: return 8.0 * kPi * a0 * a0 * a0;
  }
  throw Error(ErrorKind::InvalidArgument, "spatial dimension must be 1, 2 or 3");
}

void check_dimension(int n) {
  if (n < 1 || n > 3) throw Error(ErrorKind::InvalidArgument, "spatial dimension must be 1, 2 or 3");
}

}  // namespace

double SmearingProfile::density(const Vec3d& xi, int n) const {
  check_dimension(n);
  const double r = xi.head(n).norm();
  switch (kind_) {
    case Kind::Pointlike:
      throw Error(ErrorKind::InvalidArgument, "pointlike smearing is a distribution and cannot be sampled");
    case Kind::GaussianBall:
      return std::pow(2.0 * kPi * scale_ * scale_, -0.5 * n) * std::exp(-0.5 * r * r / (scale_ * scale_));
    case Kind::ExponentialAtomLike:
      return std::exp(-r / scale_) / exponential_norm(scale_, n);
  }
  return 0.0;
}

double SmearingProfile::fourier_radial(double q, int n) const {
  check_dimension(n);
  switch (kind_) {
    case Kind::Pointlike:
      return 1.0;
    case Kind::GaussianBall:
      return std::exp(-0.5 * scale_ * scale_ * q * q);
    case Kind::ExponentialAtomLike:
      return std::pow(1.0 + scale_ * scale_ * q * q, -0.5 * (n + 1));
  }
  return 0.0;
}

double SmearingProfile::transverse_transform(double z, double k_perp, int n) const {
  check_dimension(n);
  switch (kind_) {
    case Kind::Pointlike:
      throw Error(ErrorKind::InvalidArgument, "pointlike smearing has no transverse profile");
    case Kind::GaussianBall:
      return std::exp(-0.5 * z * z / (scale_ * scale_)) / (std::sqrt(2.0 * kPi) * scale_) *
             (n > 1 ? std::exp(-0.5 * scale_ * scale_ * k_perp * k_perp) : 1.0);
    case Kind::ExponentialAtomLike: {
      const double alpha = 1.0 / scale_;
      const double az = std::abs(z);
      const double s = std::sqrt(k_perp * k_perp + alpha * alpha);
      const double norm = exponential_norm(scale_, n);
      if (n == 1) return std::exp(-az * alpha) / norm;
      if (n == 2) {
        // 2 int_0^inf dx exp(-alpha sqrt(x^2 + z^2)) cos(k x)
        const double zk = (az * s < 1e-12) ? 1.0 / s : az * std::cyl_bessel_k(1.0, az * s);
        return 2.0 * alpha * zk / s / norm;
      }
      // 2 pi int_0^inf rho drho exp(-alpha sqrt(rho^2 + z^2)) J0(k rho)
      return 2.0 * kPi * alpha * std::exp(-az * s) * (1.0 + az * s) / (s * s * s) / norm;
    }
  }
  return 0.0;
}

double SmearingProfile::support_radius() const {
  switch (kind_) {
    case Kind::Pointlike: return 0.0;
    case Kind::GaussianBall: return scale_ * std::sqrt(2.0 * std::log(1e16));
    case Kind::ExponentialAtomLike: return 40.0 * scale_;
  }
  return 0.0;
}

double SmearingProfile::bandwidth() const {
  switch (kind_) {
    case Kind::Pointlike: return std::numeric_limits<double>::infinity();
    case Kind::GaussianBall: return 12.0 / scale_;
    case Kind::ExponentialAtomLike: return 12.0 / scale_;
  }
  return 0.0;
}

std::string SmearingProfile::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Pointlike: os << "pointlike"; break;
    case Kind::GaussianBall: os << "gaussian_ball(width=" << scale_ << ")"; break;
    case Kind::ExponentialAtomLike: os << "exponential(scale=" << scale_ << ")"; break;
  }
  return os.str();
}

double switching_eval(const SwitchingProfile& chi, double tau) { return chi.value(tau); }

Complex switching_fourier(const SwitchingProfile& chi, double omega) { return chi.fourier(omega); }

Complex smearing_fourier(const SmearingProfile& f, const Vec3d& q, int n) {
  if (n < 1 || n > 3) throw Error(ErrorKind::InvalidArgument, "spatial dimension must be 1, 2 or 3");
  return {f.fourier_radial(q.head(n).norm(), n), 0.0};
}

}  // namespace udw
