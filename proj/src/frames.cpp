#include "udw/frames.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "udw/kinematics.hpp"

namespace udw {
namespace {

void require_subluminal(const Vec3d& v, double c) {
  if (!(v.norm() < c)) {
    std::ostringstream os;
    os << "boost speed must satisfy |v| < c (|v| = " << v.norm() << ", c = " << c << ")";
    throw Error(ErrorKind::SuperluminalBoost, os.str());
  }
}

// Illinois-modified regula falsi on a sign-changing bracket.
template <typename F>
double solve_bracketed(F&& g, double lo, double glo, double hi, double ghi) {
  int side = 0;
  for (int iter = 0; iter < 200; ++iter) {
    double x = (lo * ghi - hi * glo) / (ghi - glo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double gx = g(x);
    if (gx == 0.0 || hi - lo <= 4e-16 * std::max(1.0, std::abs(x))) return x;
    if ((gx > 0.0) == (glo > 0.0)) {
      lo = x;
      glo = gx;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = x;
      ghi = gx;
      if (side == 1) glo *= 0.5;
      side = 1;
    }
  }
  throw Error(ErrorKind::MapNotInvertibleOnSupport, "simultaneity-slice search did not converge");
}

Event4d lab_offset(const Event4d& lab_event, const Worldline::Sample& s) {
  return make_event(lab_event(0) - s.t, spatial(lab_event) - s.x);
}

}  // namespace

FrameMap FrameMap::identity(double c) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "c must be positive");
  FrameMap m;
  m.kind_ = Kind::Identity;
  m.c_ = c;
  m.worldline_ = std::make_shared<const Worldline>(Worldline::rest(c));
  return m;
}

FrameMap FrameMap::boost(const Vec3d& v, double c) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "c must be positive");
  require_subluminal(v, c);
  if (v.norm() == 0.0) return identity(c);
  FrameMap m;
  m.kind_ = Kind::Boost;
  m.c_ = c;
  m.velocity_ = v;
  m.worldline_ = std::make_shared<const Worldline>(Worldline::inertial(v, c));
  return m;
}

FrameMap FrameMap::comoving(const Worldline& w, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::InvalidArgument, "comoving radius must be finite and >= 0");
  }
  const double bound = radius * w.max_proper_acceleration() / (w.c() * w.c());
  if (!(bound < 0.1)) {
    std::ostringstream os;
    os << "rigid comoving frame requires radius * a / c^2 < 0.1 (got " << bound << ")";
    throw Error(ErrorKind::MapNotInvertibleOnSupport, os.str());
  }
  FrameMap m;
  m.kind_ = Kind::WorldlineComoving;
  m.c_ = w.c();
  m.radius_ = radius;
  m.worldline_ = std::make_shared<const Worldline>(w);
  return m;
}

Event4d FrameMap::forward(const Event4d& e) const {
  switch (kind_) {
    case Kind::Identity:
      return e;
    case Kind::Boost:
      return boost_to_lab<double>(e, velocity_, c_);
    case Kind::WorldlineComoving: {
      const auto s = worldline_->at_proper_time(e(0), worldline_->default_epoch());
      const Event4d offset = boost_to_lab<double>(make_event(0.0, spatial(e)), s.v, c_);
      return make_event(s.t + offset(0), s.x + spatial(offset));
    }
  }
  return e;
}

Event4d FrameMap::inverse(const Event4d& e) const {
  switch (kind_) {
    case Kind::Identity:
      return e;
    case Kind::Boost:
      return boost_to_detector<double>(e, velocity_, c_);
    case Kind::WorldlineComoving:
      return comoving_inverse(e);
  }
  return e;
}

Event4d FrameMap::comoving_inverse(const Event4d& e) const {
  const Worldline& w = *worldline_;
  const double epoch = w.default_epoch();
  switch (w.kind()) {
    case Worldline::Kind::Rest:
      return make_event(e(0) - epoch, spatial(e) - w.origin());
    case Worldline::Kind::Inertial: {
      const Event4d d = boost_to_detector<double>(make_event(e(0), spatial(e) - w.origin()),
                                                  w.inertial_velocity(), c_);
      const double gamma = udw::lorentz_factor<double>(w.inertial_velocity(), c_);
      return make_event(d(0) - epoch / gamma, spatial(d));
    }
    case Worldline::Kind::UniformAcceleration: {
      // Rindler chart centred on the horizon vertex.
      const double a = w.acceleration();
      const Vec3d& n = w.direction();
      const double L = c_ * c_ / a;
      const Vec3d dx = spatial(e) - w.origin();
      const double X = n.dot(dx) + L;
      const double cT = c_ * e(0);
      if (!(X > std::abs(cT))) {
        throw Error(ErrorKind::MapNotInvertibleOnSupport, "event lies outside the Rindler wedge");
      }
      const double rho = std::sqrt((X - cT) * (X + cT));
      const double tau = (c_ / a) * std::atanh(cT / X) - w.proper_time(epoch, 0.0);
      const Vec3d xi = dx + (rho - L - n.dot(dx)) * n;
      return make_event(tau, xi);
    }
    case Worldline::Kind::Tabulated:
      break;
  }

  // Find the simultaneity slice through the event: u(tau) . (X - z(tau)) = 0.
  const double t = e(0);
  const Vec3d x = spatial(e);
  auto g = [&](double tau) {
    const auto s = w.at_proper_time(tau, epoch);
    return (t - s.t) - s.v.dot(x - s.x) / (c_ * c_);
  };
  const auto [t_lo, t_hi] = w.domain();
  const double tau_lo = w.proper_time(t_lo, epoch);
  const double tau_hi = w.proper_time(t_hi, epoch);
  const double guess = w.proper_time(std::clamp(t, t_lo, t_hi), epoch);
  double step = std::max(1e-3 * (tau_hi - tau_lo), (x - w.position(std::clamp(t, t_lo, t_hi))).norm() / c_);
  double a = guess, b = guess;
  double ga = g(a), gb = ga;
  if (ga == 0.0) {
    b = a;
  } else {
    // g decreases along tau on the valid region; walk towards the sign change.
    const double dir = ga > 0.0 ? 1.0 : -1.0;
    for (int k = 0; k < 64; ++k) {
      const double next = std::clamp(b + dir * step, tau_lo, tau_hi);
      const double gn = g(next);
      a = b;
      ga = gb;
      b = next;
      gb = gn;
      if ((ga > 0.0) != (gb > 0.0) || gb == 0.0) break;
      if (next == tau_lo || next == tau_hi) {
        throw Error(ErrorKind::MapNotInvertibleOnSupport,
                    "event's simultaneity slice lies outside the tabulated worldline");
      }
      step *= 2.0;
    }
    if ((ga > 0.0) == (gb > 0.0) && gb != 0.0) {
      throw Error(ErrorKind::MapNotInvertibleOnSupport, "could not bracket the simultaneity slice");
    }
    if (a > b) {
      std::swap(a, b);
      std::swap(ga, gb);
    }
  }
  const double tau = (gb == 0.0) ? b : solve_bracketed(g, a, ga, b, gb);
  const auto s = w.at_proper_time(tau, epoch);
  const Event4d d = boost_to_detector<double>(lab_offset(e, s), s.v, c_);
  return make_event(tau, spatial(d));
}

double FrameMap::jacobian(const Event4d& e) const {
  switch (kind_) {
    case Kind::Identity:
    case Kind::Boost:
      return 1.0;
    case Kind::WorldlineComoving:
      break;
  }
  const Worldline& w = *worldline_;
  switch (w.kind()) {
    case Worldline::Kind::Rest:
    case Worldline::Kind::Inertial:
      return 1.0;
    case Worldline::Kind::UniformAcceleration: {
      const double xi_par = w.direction().dot(spatial(inverse(e)));
      return 1.0 / (1.0 + w.acceleration() * xi_par / (c_ * c_));
    }
    case Worldline::Kind::Tabulated:
      break;
  }
  return jacobian_numeric(e);
}

double FrameMap::jacobian_numeric(const Event4d& e, double step) const {
  Eigen::Matrix4d J;
  for (int j = 0; j < 4; ++j) {
    const double h = step * std::max(1.0, std::abs(e(j)));
    Event4d plus = e, minus = e;
    plus(j) += h;
    minus(j) -= h;
    J.col(j) = (inverse(plus) - inverse(minus)) / (2.0 * h);
  }
  return std::abs(J.determinant());
}

std::string FrameMap::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Identity:
      os << "identity";
      break;
    case Kind::Boost:
      os << "boost(v=(" << velocity_.transpose() << "))";
      break;
    case Kind::WorldlineComoving:
      os << "comoving(" << worldline_->describe() << ", radius=" << radius_ << ")";
      break;
  }
  return os.str();
}

FrameMap boost_map(const Vec3d& v, double c) { return FrameMap::boost(v, c); }

double jacobian_det(const FrameMap& m, const Event4d& lab_event) { return m.jacobian(lab_event); }

double HamiltonianDensity::coefficient(double s) const { return coefficient_(make_event(s, Vec3d::Zero())); }

double HamiltonianDensity::monopole_time(double s) const {
  return monopole_time_(make_event(s, Vec3d::Zero()));
}

Event4d HamiltonianDensity::field_event(double s) const {
  return field_event_(make_event(s, Vec3d::Zero()));
}

std::string HamiltonianDensity::describe() const {
  std::ostringstream os;
  os << (pointlike_ ? "pointlike" : "smeared") << " density in the "
     << (chart_ == Chart::Detector ? "detector" : "lab") << " chart, switched in "
     << (switching_frame_ == SwitchingFrame::Detector ? "proper" : "lab") << " time, map "
     << map_->describe();
  return os.str();
}

HamiltonianDensity detector_density(const DetectorSpec& detector, const SwitchingProfile& chi,
                                    const SmearingProfile& f, const FrameMap& m, int dimension) {
  detector.validate();
  HamiltonianDensity h;
  h.chart_ = Chart::Detector;
  h.switching_frame_ = SwitchingFrame::Detector;
  h.pointlike_ = f.is_pointlike();
  h.dimension_ = dimension;
  h.detector_ = detector;
  h.map_ = std::make_shared<const FrameMap>(m);
  const double scale = m.c() * detector.coupling;
  if (h.pointlike_) {
    h.coefficient_ = [scale, chi](const Event4d& e) { return scale * chi(e(0)); };
    h.field_event_ = [map = h.map_](const Event4d& e) { return map->forward(make_event(e(0), Vec3d::Zero())); };
  } else {
    h.coefficient_ = [scale, chi, f, dimension](const Event4d& e) {
      return scale * chi(e(0)) * f.density(spatial(e), dimension);
    };
    h.field_event_ = [map = h.map_](const Event4d& e) { return map->forward(e); };
  }
  h.monopole_time_ = [](const Event4d& e) { return e(0); };
  return h;
}

HamiltonianDensity lab_switched_density(const DetectorSpec& detector, const SwitchingProfile& chi_lab,
                                        const SmearingProfile& f, const FrameMap& m, int dimension) {
  detector.validate();
  HamiltonianDensity h;
  h.chart_ = Chart::Lab;
  h.switching_frame_ = SwitchingFrame::Lab;
  h.pointlike_ = f.is_pointlike();
  h.dimension_ = dimension;
  h.detector_ = detector;
  h.map_ = std::make_shared<const FrameMap>(m);
  const double scale = m.c() * detector.coupling;
  auto map = h.map_;
  if (h.pointlike_) {
    const double epoch = m.worldline().default_epoch();
    h.coefficient_ = [scale, chi_lab, map](const Event4d& e) {
      return scale * chi_lab(e(0)) / map->worldline().lorentz_factor(e(0));
    };
    h.monopole_time_ = [map, epoch](const Event4d& e) { return map->worldline().proper_time(e(0), epoch); };
    h.field_event_ = [map](const Event4d& e) { return make_event(e(0), map->worldline().position(e(0))); };
  } else {
    h.coefficient_ = [scale, chi_lab, f, dimension, map](const Event4d& e) {
      const Event4d d = map->inverse(e);
      return scale * chi_lab(e(0)) * f.density(spatial(d), dimension) * map->jacobian(e);
    };
    h.monopole_time_ = [map](const Event4d& e) { return map->inverse(e)(0); };
    h.field_event_ = [](const Event4d& e) { return e; };
  }
  return h;
}

HamiltonianDensity transform_density(const HamiltonianDensity& h, const FrameMap& m) {
  HamiltonianDensity out = h;
  out.map_ = std::make_shared<const FrameMap>(m);
  auto map = out.map_;
  const auto coef = h.coefficient_;
  const auto mono = h.monopole_time_;
  const auto field = h.field_event_;

  if (h.pointlike_) {
    const double epoch = m.worldline().default_epoch();
    if (h.chart_ == Chart::Detector) {
      out.chart_ = Chart::Lab;
      auto tau_of = [map, epoch](const Event4d& e) {
        return make_event(map->worldline().proper_time(e(0), epoch), Vec3d::Zero());
      };
      out.coefficient_ = [coef, tau_of, map](const Event4d& e) {
        return coef(tau_of(e)) / map->worldline().lorentz_factor(e(0));
      };
      out.monopole_time_ = [mono, tau_of](const Event4d& e) { return mono(tau_of(e)); };
      out.field_event_ = [field, tau_of](const Event4d& e) { return field(tau_of(e)); };
    } else {
      out.chart_ = Chart::Detector;
      auto t_of = [map, epoch](const Event4d& e) {
        return make_event(map->worldline().coordinate_time(e(0), epoch), Vec3d::Zero());
      };
      out.coefficient_ = [coef, t_of, map](const Event4d& e) {
        const Event4d t = t_of(e);
        return coef(t) * map->worldline().lorentz_factor(t(0));
      };
      out.monopole_time_ = [mono, t_of](const Event4d& e) { return mono(t_of(e)); };
      out.field_event_ = [field, t_of](const Event4d& e) { return field(t_of(e)); };
    }
    return out;
  }

  if (h.chart_ == Chart::Detector) {
    out.chart_ = Chart::Lab;
    out.coefficient_ = [coef, map](const Event4d& e) { return coef(map->inverse(e)) * map->jacobian(e); };
    out.monopole_time_ = [mono, map](const Event4d& e) { return mono(map->inverse(e)); };
    out.field_event_ = [field, map](const Event4d& e) { return field(map->inverse(e)); };
  } else {
    out.chart_ = Chart::Detector;
    out.coefficient_ = [coef, map](const Event4d& d) {
      const Event4d e = map->forward(d);
      return coef(e) / map->jacobian(e);
    };
    out.monopole_time_ = [mono, map](const Event4d& d) { return mono(map->forward(d)); };
    out.field_event_ = [field, map](const Event4d& d) { return field(map->forward(d)); };
  }
  return out;
}

HamiltonianDensity reparametrize_hamiltonian(const HamiltonianDensity& h, const Worldline& w) {
  if (!h.pointlike_) {
    throw Error(ErrorKind::NotPointlike, "reparametrization of a smeared density needs transform_density");
  }
  if (h.chart_ != Chart::Detector) {
    throw Error(ErrorKind::InvalidArgument, "Hamiltonian already generates lab-time translations");
  }
  return transform_density(h, FrameMap::comoving(w, 0.0));
}

}  // namespace udw
