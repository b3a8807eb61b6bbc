#include "udw/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kspace.hpp"
#include "udw/kinematics.hpp"
#include "udw/quadrature.hpp"

namespace udw {

const char* to_string(Route r) {
  switch (r) {
    case Route::DetectorFrame: return "detector";
    case Route::LabFrame: return "lab";
    case Route::InertialClosed: return "closed";
    case Route::SmearedInertial: return "smeared";
    case Route::Density: return "density";
  }
  return "?";
}

std::optional<Route> route_from_string(std::string_view name) {
  for (Route r : {Route::DetectorFrame, Route::LabFrame, Route::InertialClosed, Route::SmearedInertial,
                  Route::Density}) {
    if (name == to_string(r)) return r;
  }
  return std::nullopt;
}

namespace {

bool outside_dimension(const Vec3d& x, int d) {
  for (int i = d; i < 3; ++i) {
    if (x(i) != 0.0) return true;
  }
  return false;
}

}  // namespace

void Scenario::validate() const {
  detector.validate();
  field.validate();
  if (field.mass != 0.0) {
    throw Error(ErrorKind::InvalidArgument, "response formulas require a massless field (mass = 0)");
  }
  if (std::abs(worldline.c() - field.c) > 1e-12 * field.c) {
    throw Error(ErrorKind::InvalidArgument, "worldline and field disagree on c");
  }
  const int d = field.dimension;
  bool off = outside_dimension(worldline.origin(), d);
  switch (worldline.kind()) {
    case Worldline::Kind::Rest:
      break;
    case Worldline::Kind::Inertial:
      off = off || outside_dimension(worldline.inertial_velocity(), d);
      break;
    case Worldline::Kind::UniformAcceleration:
      off = off || outside_dimension(worldline.direction(), d);
      break;
    case Worldline::Kind::Tabulated: {
      const auto [lo, hi] = worldline.domain();
      for (int i = 0; i <= 64 && !off; ++i) {
        off = outside_dimension(worldline.position(lo + (hi - lo) * i / 64.0), d);
      }
      break;
    }
  }
  if (off) {
    std::ostringstream os;
    os << "worldline leaves the " << d << " spatial dimension(s) of the field";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

Complex wightman_momentum_kernel(const FieldSpec& field, const Vec3d& k, const Event4d& delta) {
  const int d = field.dimension;
  const double kn = k.head(d).norm();
  if (kn == 0.0) throw Error(ErrorKind::ZeroMode, "Wightman kernel is singular at |k| = 0");
  const double phase = field.c * kn * delta(0) - k.head(d).dot(delta.segment(1, d));
  return std::polar(1.0 / (2.0 * std::pow(2.0 * kPi, d) * kn), -phase);
}

NullCovector ktilde(const Vec3d& v, const Vec3d& k, double c, bool printed) {
  const double speed = v.norm();
  if (!(speed < c)) throw Error(ErrorKind::SuperluminalBoost, "k-tilde needs |v| < c");
  NullCovector out;
  const double kn = k.norm();
  if (speed == 0.0) {
    out.k0 = -kn;
    out.k = k;
    return out;
  }
  const double gamma = udw::lorentz_factor<double>(v, c);
  const Vec3d n = v / speed;
  const double k_par = k.dot(n);
  const Vec3d k_perp = k - k_par * n;
  out.k0 = gamma * (-kn + k.dot(v) / c);
  const double sign = printed ? 1.0 : -1.0;
  out.k = gamma * (k_par + sign * kn * speed / c) * n + k_perp;
  return out;
}

namespace {

// Switching window and its natural breakpoints, in the time the switching is
// defined in.
struct Window {
  std::vector<double> breaks;
};

Window switching_window(const SwitchingProfile& chi, double threshold, int panels_per_span) {
  const auto [lo, hi] = chi.support(threshold);
  std::vector<double> knots{lo};
  for (double k : chi.kinks()) {
    if (k > lo && k < hi) knots.push_back(k);
  }
  knots.push_back(hi);
  Window w;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const auto sub = quad::uniform_breakpoints(knots[i], knots[i + 1], panels_per_span);
    w.breaks.insert(w.breaks.end(), sub.begin(), sub.end() - 1);
  }
  w.breaks.push_back(knots.back());
  return w;
}

struct Setup {
  const Scenario& s;
  const ResponseOptions& o;
  double c;
  double epoch;
  double omega;
  double amp_rel;
  double amp_abs;
  double support_threshold;
  std::vector<double> tau_breaks;  // proper-time partition of the switching window
  std::vector<double> t_breaks;    // the same window in lab time

  Setup(const Scenario& sc, const ResponseOptions& opt)
      : s(sc), o(opt), c(sc.field.c), epoch(sc.worldline.default_epoch()), omega(sc.detector.gap) {
    amp_rel = std::clamp(1e-3 * o.rel_tol, 1e-13, 1e-5);
    amp_abs = 1e-3 * amp_rel * s.switching.area();
    support_threshold = std::clamp(1e-4 * o.rel_tol, 1e-18, 1e-8);
    const Window win = switching_window(s.switching, support_threshold, 4);
    const Worldline& w = s.worldline;
    if (s.switching_frame == SwitchingFrame::Detector) {
      tau_breaks = win.breaks;
      for (double tau : tau_breaks) t_breaks.push_back(w.coordinate_time(tau, epoch));
    } else {
      t_breaks = win.breaks;
      for (double t : t_breaks) tau_breaks.push_back(w.proper_time(t, epoch));
    }
  }

  // Smallest Doppler factor gamma (1 - beta) met while the switching is
  // large enough for its square to matter at the requested accuracy.
  double min_doppler() const {
    const Worldline& w = s.worldline;
    const auto [lo, hi] = s.switching.support(std::clamp(0.1 * std::sqrt(o.rel_tol), 1e-8, 1e-3));
    double tlo = lo, thi = hi;
    if (s.switching_frame == SwitchingFrame::Detector) {
      tlo = w.coordinate_time(lo, epoch);
      thi = w.coordinate_time(hi, epoch);
    }
    double best = 1.0;
    for (int i = 0; i <= 256; ++i) {
      const double t = tlo + (thi - tlo) * i / 256.0;
      const double beta = w.velocity(t).norm() / c;
      best = std::min(best, w.lorentz_factor(t) * (1.0 - beta));
    }
    return best;
  }

  detail::KSpaceProblem problem(bool smeared) const {
    detail::KSpaceProblem p;
    p.dimension = s.field.dimension;
    p.rel_tol = o.rel_tol;
    p.k_min = s.field.ir_cutoff.value_or(0.0);
    p.integrand_floor = 10.0 * amp_abs * amp_abs;
    p.integrand_bound = s.switching.area() * s.switching.area();
    const Worldline& w = s.worldline;
    if (w.kind() == Worldline::Kind::Rest) {
      p.symmetry = detail::Symmetry::Isotropic;
    } else if (auto axis = w.motion_axis()) {
      p.symmetry = detail::Symmetry::Axial;
      p.axis = *axis;
    } else {
      p.symmetry = detail::Symmetry::None;
    }
    double bandwidth = s.switching.bandwidth();
    if (s.switching_frame == SwitchingFrame::Lab) {
      // A lab-time window looks shorter in proper time by up to gamma.
      const auto [lo, hi] = s.switching.support(1e-6);
      bandwidth *= std::max(w.lorentz_factor(lo), w.lorentz_factor(hi));
    }
    p.k_scale = (std::abs(omega) + bandwidth) / c;
    p.k_decay = p.k_scale / min_doppler();
    if (smeared && !s.smearing.is_pointlike()) {
      p.k_decay = std::min(p.k_decay, std::max(p.k_scale, s.smearing.bandwidth() / min_doppler()));
    }
    return p;
  }
};

quad::Tolerance amplitude_tolerance(const Setup& st, double square_abs = 0.0) {
  quad::Tolerance tol;
  tol.rel = st.amp_rel;
  tol.abs = st.amp_abs;
  tol.square_abs = square_abs;
  tol.max_intervals = 4000;
  return tol;
}

// Amplitudes far below the switching area carry absolute noise that is
// harmless in |A|^2, and amplitudes already within the |A|^2 accuracy the
// momentum integral asked for are covered by its own error, so only the rest
// set the relative error.
struct AmplitudeStats {
  long count = 0;
  double significant = 0.0;
  double worst_rel_error = 0.0;

  void record(const quad::Estimate<Complex>& e, double square_abs) {
    ++count;
    const double mag = std::abs(e.value);
    if (mag <= significant) return;
    if (square_abs > 0.0 && e.error * (2.0 * mag + e.error) <= square_abs) return;
    worst_rel_error = std::max(worst_rel_error, std::min(1.0, e.error / mag));
  }
};

AmplitudeStats make_stats(const Setup& st) {
  AmplitudeStats stats;
  stats.significant = 1e-4 * st.s.switching.area();
  return stats;
}

// Proper-time integral along the worldline.
Complex amplitude_detector(const Setup& st, const Vec3d& k, AmplitudeStats* stats, double square_abs = 0.0) {
  const Worldline& w = st.s.worldline;
  const double kn = k.norm();
  const bool lab_switched = st.s.switching_frame == SwitchingFrame::Lab;
  double cached_tau = std::numeric_limits<double>::quiet_NaN();
  Worldline::Sample sample;
  auto at = [&](double tau) -> const Worldline::Sample& {
    if (tau != cached_tau) {
      sample = w.at_proper_time(tau, st.epoch);
      cached_tau = tau;
    }
    return sample;
  };
  auto amp = [&](double tau) {
    return Complex(lab_switched ? st.s.switching(at(tau).t) : st.s.switching(tau), 0.0);
  };
  auto phase = [&](double tau) {
    const auto& p = at(tau);
    return st.omega * tau + st.c * kn * p.t - k.dot(p.x);
  };
  auto dphase = [&](double tau) {
    const auto& p = at(tau);
    return st.omega + p.gamma * (st.c * kn - k.dot(p.v));
  };
  const auto est = quad::integrate_oscillatory(amp, phase, dphase, std::span<const double>(st.tau_breaks),
                                               amplitude_tolerance(st, square_abs));
  if (stats) stats->record(est, square_abs);
  return est.value;
}

// Lab-time integral with the redshift factor 1/gamma(t).
Complex amplitude_lab(const Setup& st, const Vec3d& k, AmplitudeStats* stats, double square_abs = 0.0) {
  const Worldline& w = st.s.worldline;
  const double kn = k.norm();
  const bool lab_switched = st.s.switching_frame == SwitchingFrame::Lab;
  struct LabSample {
    double tau, gamma;
    Vec3d x, v;
  };
  double cached_t = std::numeric_limits<double>::quiet_NaN();
  LabSample sample{};
  auto at = [&](double t) -> const LabSample& {
    if (t != cached_t) {
      sample.tau = w.proper_time(t, st.epoch);
      sample.gamma = w.lorentz_factor(t);
      sample.x = w.position(t);
      sample.v = w.velocity(t);
      cached_t = t;
    }
    return sample;
  };
  auto amp = [&](double t) {
    const auto& p = at(t);
    return Complex((lab_switched ? st.s.switching(t) : st.s.switching(p.tau)) / p.gamma, 0.0);
  };
  auto phase = [&](double t) {
    const auto& p = at(t);
    return st.omega * p.tau + st.c * kn * t - k.dot(p.x);
  };
  auto dphase = [&](double t) {
    const auto& p = at(t);
    return st.omega / p.gamma + st.c * kn - k.dot(p.v);
  };
  const auto est = quad::integrate_oscillatory(amp, phase, dphase, std::span<const double>(st.t_breaks),
                                               amplitude_tolerance(st, square_abs));
  if (stats) stats->record(est, square_abs);
  return est.value;
}

Complex amplitude_closed(const Setup& st, const Vec3d& k) {
  const Worldline& w = st.s.worldline;
  if (!w.is_inertial()) {
    throw Error(ErrorKind::InvalidArgument, "closed form needs a rest or inertial worldline");
  }
  const Vec3d v = w.inertial_velocity();
  const double gamma = udw::lorentz_factor<double>(v, st.c);
  const double arg = st.omega + gamma * (st.c * k.norm() - k.dot(v));
  if (st.s.switching_frame == SwitchingFrame::Lab) {
    // chi(gamma tau) in proper time.
    return st.s.switching.fourier(arg / gamma) / gamma;
  }
  return st.s.switching.fourier(arg);
}

void require_pointlike(const Scenario& s, const char* route) {
  if (!s.smearing.is_pointlike()) {
    throw Error(ErrorKind::NotPointlike,
                std::string("the ") + route + " route is for pointlike detectors; use the smeared or density route");
  }
}

ProbabilityResult finish(const Scenario& s, Route route, const detail::KSpaceResult& k,
                         const AmplitudeStats& stats) {
  ProbabilityResult r;
  const double scale = s.field.c * s.field.c * s.detector.coupling * s.detector.coupling;
  r.value = scale * k.value;
  r.abs_error = scale * k.abs_error + 2.0 * stats.worst_rel_error * std::abs(r.value);
  r.route = route;
  r.gap = s.detector.gap;
  r.worldline = s.worldline.describe();
  r.amplitude_evaluations = stats.count > 0 ? stats.count : k.integrand_calls;
  r.flagged_negative = r.value < -r.abs_error;
  return r;
}

ProbabilityResult zero_coupling(const Scenario& s, Route route) {
  ProbabilityResult r;
  r.route = route;
  r.gap = s.detector.gap;
  r.worldline = s.worldline.describe();
  return r;
}

}  // namespace

ProbabilityResult probability_detector_frame(const Scenario& s, const ResponseOptions& o) {
  s.validate();
  require_pointlike(s, "detector-frame");
  if (s.detector.coupling == 0.0) return zero_coupling(s, Route::DetectorFrame);
  const Setup st(s, o);
  AmplitudeStats stats = make_stats(st);
  const auto k = detail::integrate_kspace(
      [&](const Vec3d& kv, double a) { return std::norm(amplitude_detector(st, kv, &stats, a)); }, st.problem(false));
  return finish(s, Route::DetectorFrame, k, stats);
}

ProbabilityResult probability_lab_frame(const Scenario& s, const ResponseOptions& o) {
  s.validate();
  require_pointlike(s, "lab-frame");
  if (s.detector.coupling == 0.0) return zero_coupling(s, Route::LabFrame);
  const Setup st(s, o);
  AmplitudeStats stats = make_stats(st);
  const auto k = detail::integrate_kspace(
      [&](const Vec3d& kv, double a) { return std::norm(amplitude_lab(st, kv, &stats, a)); }, st.problem(false));
  return finish(s, Route::LabFrame, k, stats);
}

ProbabilityResult probability_inertial_closed(const Scenario& s, const ResponseOptions& o) {
  s.validate();
  require_pointlike(s, "closed-form");
  if (!s.worldline.is_inertial()) {
    throw Error(ErrorKind::InvalidArgument, "closed form needs a rest or inertial worldline");
  }
  if (s.detector.coupling == 0.0) return zero_coupling(s, Route::InertialClosed);
  const Setup st(s, o);
  AmplitudeStats stats = make_stats(st);
  auto problem = st.problem(false);
  problem.integrand_floor = 0.0;
  const auto k = detail::integrate_kspace([&](const Vec3d& kv, double) { return std::norm(amplitude_closed(st, kv)); },
                                          problem);
  return finish(s, Route::InertialClosed, k, stats);
}

ProbabilityResult probability_smeared_inertial(const Scenario& s, const ResponseOptions& o) {
  s.validate();
  if (!s.worldline.is_inertial()) {
    throw Error(ErrorKind::InvalidArgument,
                "the smeared closed form needs a rest or inertial worldline; use the density route");
  }
  if (s.switching_frame == SwitchingFrame::Lab && !s.smearing.is_pointlike()) {
    throw Error(ErrorKind::InvalidArgument,
                "lab-switched smeared detectors do not factorize; use the density route");
  }
  if (s.detector.coupling == 0.0) return zero_coupling(s, Route::SmearedInertial);
  const Setup st(s, o);
  const Vec3d v = s.worldline.inertial_velocity();
  const int d = s.field.dimension;
  AmplitudeStats stats;
  auto F = [&](const Vec3d& kv, double) {
    const NullCovector kt = ktilde(v, kv, st.c, o.use_printed_ktilde);
    const double f = s.smearing.fourier_radial(kt.k.head(d).norm(), d);
    if (s.switching_frame == SwitchingFrame::Lab) {
      const double gamma = udw::lorentz_factor<double>(v, st.c);
      return f * f * std::norm(s.switching.fourier((st.omega - st.c * kt.k0) / gamma) / gamma);
    }
    return f * f * std::norm(s.switching.fourier(st.omega - st.c * kt.k0));
  };
  auto problem = st.problem(true);
  problem.integrand_floor = 0.0;
  const auto k = detail::integrate_kspace(F, problem);
  return finish(s, Route::SmearedInertial, k, stats);
}

ProbabilityResult probability_density(const Scenario& s, const ResponseOptions& o) {
  s.validate();
  if (s.smearing.is_pointlike()) {
    auto r = probability_detector_frame(s, o);
    r.route = Route::Density;
    return r;
  }
  if (s.detector.coupling == 0.0) return zero_coupling(s, Route::Density);
  const Worldline& w = s.worldline;
  Vec3d axis = Vec3d::UnitX();
  if (w.kind() != Worldline::Kind::Rest) {
    const auto a = w.motion_axis();
    if (!a) throw Error(ErrorKind::InvalidArgument, "density route needs motion along a fixed axis");
    axis = *a;
  }
  const FrameMap map = FrameMap::comoving(w, s.smearing.length_scale());
  const Setup st(s, o);
  const int d = s.field.dimension;
  const double c = st.c;
  const double a_max = w.max_proper_acceleration();
  double radius = s.smearing.support_radius();
  if (a_max > 0.0) radius = std::min(radius, 0.9 * c * c / a_max);
  const bool clipped = radius < s.smearing.support_radius();

  // Smearing mass lost to the clipped comoving slab.
  double lost = 0.0;
  if (clipped) {
    quad::Tolerance mass_tol;
    mass_tol.rel = 1e-12;
    const double kept = quad::integrate_adaptive<double>(
                            [&](double z) { return s.smearing.transverse_transform(z, 0.0, d); }, -radius,
                            radius, mass_tol)
                            .value;
    lost = std::max(0.0, 1.0 - kept);
  }

  std::vector<double> tau_breaks = st.tau_breaks;
  const bool lab_switched = s.switching_frame == SwitchingFrame::Lab;
  if (lab_switched) {
    // Points off the worldline are switched at t(tau, xi), which differs from
    // t(tau) by up to gamma |v| radius / c^2.
    const double t_lo = st.t_breaks.front(), t_hi = st.t_breaks.back();
    const double g = std::max(w.lorentz_factor(t_lo), w.lorentz_factor(t_hi));
    const double pad = 2.0 * g * radius / c;
    std::vector<double> t_breaks = st.t_breaks;
    t_breaks.front() -= pad;
    t_breaks.back() += pad;
    tau_breaks.clear();
    for (double t : t_breaks) tau_breaks.push_back(w.proper_time(t, st.epoch));
  }
  const auto xi_breaks = quad::uniform_breakpoints(-radius, radius, 8);
  const bool closed_slab = !lab_switched && !clipped;

  AmplitudeStats stats = make_stats(st);
  auto amplitude = [&](const Vec3d& k, double square_abs) {
    const double kn = k.norm();
    const Vec3d k_perp = k - k.dot(axis) * axis;
    const double kp = k_perp.head(d).norm();
    auto world_phase = [&](const Event4d& e) { return c * kn * e(0) - k.dot(spatial(e)); };

    double cached_tau = std::numeric_limits<double>::quiet_NaN();
    Worldline::Sample sample;
    auto at = [&](double tau) -> const Worldline::Sample& {
      if (tau != cached_tau) {
        sample = w.at_proper_time(tau, st.epoch);
        cached_tau = tau;
      }
      return sample;
    };
    // Slab integral over xi_par with the transverse directions done
    // analytically; its phase is measured relative to the worldline point.
    auto slab = [&](double tau) {
      const Event4d origin = map.forward(make_event(tau, Vec3d::Zero()));
      const double base = world_phase(origin);
      if (closed_slab) {
        // The map is linear in xi at fixed tau, so the slab is the smearing
        // transform at the local wavevector.
        const double q = world_phase(map.forward(make_event(tau, axis))) - base;
        return Complex(s.smearing.fourier_radial(std::hypot(q, kp), d), 0.0);
      }
      auto g = [&](double z) {
        const Event4d e = map.forward(make_event(tau, z * axis));
        const double sw = lab_switched ? s.switching(e(0)) : 1.0;
        return Complex(sw * s.smearing.transverse_transform(z, kp, d), 0.0);
      };
      auto psi = [&](double z) { return world_phase(map.forward(make_event(tau, z * axis))) - base; };
      auto none = [](double) { return 0.0; };
      quad::Tolerance tol = amplitude_tolerance(st);
      tol.abs *= 0.1;
      const auto est = quad::integrate_oscillatory(g, psi, none, std::span<const double>(xi_breaks), tol,
                                                   quad::PanelRule::ClenshawCurtisOnly);
      return est.value;
    };
    auto amp = [&](double tau) { return lab_switched ? slab(tau) : s.switching(tau) * slab(tau); };
    auto phase = [&](double tau) {
      const auto& p = at(tau);
      return st.omega * tau + c * kn * p.t - k.dot(p.x);
    };
    auto dphase = [&](double tau) {
      const auto& p = at(tau);
      return st.omega + p.gamma * (c * kn - k.dot(p.v));
    };
    const auto est = quad::integrate_oscillatory(amp, phase, dphase, std::span<const double>(tau_breaks),
                                                 amplitude_tolerance(st, square_abs));
    stats.record(est, square_abs);
    return est.value;
  };
  const auto k = detail::integrate_kspace([&](const Vec3d& kv, double a) { return std::norm(amplitude(kv, a)); },
                                          st.problem(true));
  auto r = finish(s, Route::Density, k, stats);
  r.abs_error += 2.0 * lost * std::abs(r.value);
  return r;
}

ProbabilityResult probability(const Scenario& s, Route route, const ResponseOptions& o) {
  switch (route) {
    case Route::DetectorFrame: return probability_detector_frame(s, o);
    case Route::LabFrame: return probability_lab_frame(s, o);
    case Route::InertialClosed: return probability_inertial_closed(s, o);
    case Route::SmearedInertial: return probability_smeared_inertial(s, o);
    case Route::Density: return probability_density(s, o);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown route");
}

ProbabilityResult emission_probability(const Scenario& s, Route route, const ResponseOptions& o) {
  Scenario flipped = s;
  flipped.detector.gap = -s.detector.gap;
  return probability(flipped, route, o);
}

Complex mode_amplitude(const Scenario& s, const Vec3d& k, Route route, const ResponseOptions& o) {
  s.validate();
  const Setup st(s, o);
  switch (route) {
    case Route::DetectorFrame: return amplitude_detector(st, k, nullptr);
    case Route::LabFrame: return amplitude_lab(st, k, nullptr);
    case Route::InertialClosed: return amplitude_closed(st, k);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "mode amplitudes are available for pointlike routes only");
}

}  // namespace udw
