#pragma once

// Adaptive quadrature primitives shared by every probability route.
//
//  * integrate_adaptive: globally adaptive Gauss-Kronrod (10/21) bisection.
//  * integrate_oscillatory: globally adaptive panels for g(x) exp(i phi(x)).
//    Each panel is evaluated on nested Chebyshev-Lobatto grids (9 and 17
//    points) with two rules: Clenshaw-Curtis on the full integrand and
//    Levin collocation (p' + i phi' p = g). The rule with the smaller
//    nested-difference estimate wins, so high-frequency panels cost the same
//    as low-frequency ones and stationary points are isolated by bisection.
//
// Panel sums are reduced in left-to-right order with pairwise summation so
// results do not depend on the order in which panels were refined.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <tuple>
#include <span>
#include <type_traits>
#include <vector>

#include "udw/types.hpp"

namespace udw::quad {

template <typename T>
struct Estimate {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
  bool converged = true;
};

struct Tolerance {
  double abs = 0.0;
  double rel = 1e-10;
  int max_intervals = 4000;
  /// Allowed absolute error in |I|^2; loosens the target for small results.
  double square_abs = 0.0;

  double target(double magnitude) const {
    double t = std::max(abs, rel * magnitude);
    if (square_abs > 0.0) {
      const double loose = magnitude > 0.0 ? square_abs / (3.0 * magnitude) : std::numeric_limits<double>::infinity();
      t = std::max(t, std::min(0.4 * std::sqrt(square_abs), loose));
    }
    return t;
  }
};

template <typename T>
T pairwise_sum(std::span<const T> xs) {
  if (xs.empty()) return T{};
  if (xs.size() <= 8) {
    T s{};
    for (const auto& x : xs) s += x;
    return s;
  }
  const auto half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478540, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Weights of the embedded 10-point Gauss rule at the odd Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <typename T>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  T value{};
  double error = 0.0;
  bool at_roundoff = false;  // error is dominated by rounding; splitting won't help
};

template <typename T>
struct ByError {
  bool operator()(const Panel<T>& l, const Panel<T>& r) const { return l.error < r.error; }
};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Complex& z) { return std::abs(z); }

template <typename T, typename F>
Panel<T> kronrod21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kKronrodWeights[10];
  T gauss{};
  double abs_sum = magnitude(fc) * kKronrodWeights[10];
  std::array<T, 10> f1{};
  std::array<T, 10> f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const T pair = f1[j] + f2[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (magnitude(f1[j]) + magnitude(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const T mean = kronrod * 0.5;
  double asc = kKronrodWeights[10] * magnitude(fc - mean);
  for (int j = 0; j < 10; ++j) {
    asc += kKronrodWeights[j] * (magnitude(f1[j] - mean) + magnitude(f2[j] - mean));
  }
  asc *= std::abs(half);
  abs_sum *= std::abs(half);

  Panel<T> p{a, b, kronrod * half, 0.0};
  double err = magnitude((kronrod - gauss) * half);
  // QUADPACK error scaling.
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
    if (round_floor >= err) {
      err = round_floor;
      p.at_roundoff = true;
    }
  }
  if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
  p.error = err;
  return p;
}

template <typename T, typename Rule>
Estimate<T> refine(Rule&& rule, std::span<const double> breakpoints, const Tolerance& tol,
                   int evals_per_panel) {
  std::vector<Panel<T>> heap;  // max-heap on error
  std::vector<Panel<T>> done;  // panels that cannot be split further
  Estimate<T> out;
  int panels = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    heap.push_back(rule(breakpoints[i], breakpoints[i + 1]));
    ++panels;
  }
  std::make_heap(heap.begin(), heap.end(), ByError<T>{});

  auto reduce = [&]() {
    std::vector<Panel<T>> all(heap);
    all.insert(all.end(), done.begin(), done.end());
    std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    std::vector<T> vals;
    std::vector<double> errs;
    vals.reserve(all.size());
    errs.reserve(all.size());
    for (const auto& p : all) {
      vals.push_back(p.value);
      errs.push_back(p.error);
    }
    return std::make_pair(pairwise_sum<T>(vals), pairwise_sum<double>(errs));
  };

  auto [value, err_sum] = reduce();
  int since_reduce = 0;
  while (!heap.empty()) {
    if (err_sum <= tol.target(magnitude(value))) {
      // Running sums can drift after many cancellations; confirm exactly.
      std::tie(value, err_sum) = reduce();
      since_reduce = 0;
      if (err_sum <= tol.target(magnitude(value))) break;
    }
    if (panels >= tol.max_intervals) {
      out.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), ByError<T>{});
    Panel<T> worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.at_roundoff) {
      done.push_back(worst);
      if (heap.empty()) break;
      continue;
    }
    if (!(mid > worst.a && mid < worst.b) || !std::isfinite(worst.error)) {
      done.push_back(worst);
      out.converged = false;
      if (heap.empty()) break;
      continue;
    }
    Panel<T> left = rule(worst.a, mid);
    Panel<T> right = rule(mid, worst.b);
    value += left.value + right.value - worst.value;
    err_sum += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), ByError<T>{});
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), ByError<T>{});
    ++panels;
    if (++since_reduce == 256) {
      std::tie(value, err_sum) = reduce();
      since_reduce = 0;
    }
  }
  std::tie(value, err_sum) = reduce();
  out.value = value;
  out.error = err_sum;
  out.intervals = panels;
  out.evaluations = panels * evals_per_panel;
  if (!std::isfinite(out.error)) out.converged = false;
  if (out.converged && out.error > tol.target(magnitude(out.value))) out.converged = false;
  return out;
}

/// Chebyshev-Lobatto machinery on [-1, 1] with N intervals (N + 1 nodes).
struct ChebyshevGrid {
  int n_intervals = 0;
  std::vector<double> nodes;                 // x_i = cos(pi i / N), descending
  std::vector<double> cc_weights;            // Clenshaw-Curtis weights
  Eigen::MatrixXd differentiation;           // D p ~ p' at the nodes

  explicit ChebyshevGrid(int n);
};

const ChebyshevGrid& grid9();
const ChebyshevGrid& grid17();

/// Solves m x = rhs in place by Gaussian elimination with partial pivoting;
/// rhs is overwritten with x.
template <int N>
void solve_in_place(Eigen::Matrix<Complex, N, N>& m, Eigen::Matrix<Complex, N, 1>& rhs) {
  auto mul = [](const Complex& a, const Complex& b) {
    return Complex(a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real());
  };
  for (int k = 0; k < N; ++k) {
    int pivot = k;
    double best = std::norm(m(k, k));
    for (int i = k + 1; i < N; ++i) {
      const double a = std::norm(m(i, k));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    if (pivot != k) {
      for (int j = 0; j < N; ++j) std::swap(m(k, j), m(pivot, j));
      std::swap(rhs(k), rhs(pivot));
    }
    const Complex inv = std::conj(m(k, k)) / best;
    for (int i = k + 1; i < N; ++i) m(i, k) = mul(m(i, k), inv);
    for (int j = k + 1; j < N; ++j) {
      const Complex u = m(k, j);
      for (int i = k + 1; i < N; ++i) m(i, j) -= mul(m(i, k), u);
    }
    for (int i = k + 1; i < N; ++i) rhs(i) -= mul(m(i, k), rhs(k));
  }
  for (int k = N - 1; k >= 0; --k) {
    Complex acc = rhs(k);
    for (int j = k + 1; j < N; ++j) acc -= mul(m(k, j), rhs(j));
    rhs(k) = mul(acc, std::conj(m(k, k))) / std::norm(m(k, k));
  }
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over the partition given
/// by `breakpoints` (at least two increasing values). T is double or Complex.
template <typename T, typename F>
Estimate<T> integrate_adaptive(F&& f, std::span<const double> breakpoints, const Tolerance& tol) {
  auto rule = [&](double a, double b) { return detail::kronrod21<T>(f, a, b); };
  return detail::refine<T>(rule, breakpoints, tol, 21);
}

template <typename T, typename F>
Estimate<T> integrate_adaptive(F&& f, double a, double b, const Tolerance& tol) {
  const std::array<double, 2> bp{a, b};
  return integrate_adaptive<T>(std::forward<F>(f), std::span<const double>(bp), tol);
}

/// Selects the panel rule used by integrate_oscillatory.
enum class PanelRule { Auto, ClenshawCurtisOnly };

namespace detail {

template <typename Amp, typename Phase, typename DPhase>
Panel<Complex> oscillatory_panel(Amp& amplitude, Phase& phase, DPhase& dphase, double a, double b,
                                 PanelRule mode) {
  const ChebyshevGrid& fine = grid17();
  const ChebyshevGrid& coarse = grid9();
  constexpr int kFine = 17;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<Complex, kFine> g{};
  std::array<double, kFine> phi{};
  std::array<double, kFine> dphi{};
  for (int i = 0; i < kFine; ++i) {
    const double x = center + half * fine.nodes[i];
    g[i] = amplitude(x);
    phi[i] = phase(x);
    dphi[i] = dphase(x);
  }

  // Clenshaw-Curtis on g exp(i phi).
  Complex cc_fine{};
  Complex cc_coarse{};
  for (int i = 0; i < kFine; ++i) {
    const Complex h = g[i] * std::polar(1.0, phi[i]);
    cc_fine += fine.cc_weights[i] * h;
    if (i % 2 == 0) cc_coarse += coarse.cc_weights[i / 2] * h;
  }
  cc_fine *= half;
  cc_coarse *= half;
  double cc_err = std::abs(cc_fine - cc_coarse);

  Panel<Complex> best{a, b, cc_fine, cc_err};
  if (mode == PanelRule::ClenshawCurtisOnly) return best;

  auto levin = [&]<int N>(const ChebyshevGrid& grid, int stride) -> Complex {
    Eigen::Matrix<Complex, N, N> m;
    Eigen::Matrix<Complex, N, 1> rhs;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) m(i, j) = Complex(grid.differentiation(i, j) / half, 0.0);
      m(i, i) += Complex(0.0, dphi[i * stride]);
      rhs(i) = g[i * stride];
    }
    solve_in_place<N>(m, rhs);
    // Node 0 is x = +1 (right end), node N-1 is x = -1 (left end).
    return rhs(0) * std::polar(1.0, phi[0]) - rhs(N - 1) * std::polar(1.0, phi[kFine - 1]);
  };

  // Levin is only meaningful once the phase turns over inside the panel.
  double min_rate = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kFine; ++i) min_rate = std::min(min_rate, std::abs(dphi[i]));
  if (min_rate * half < kPi) return best;

  const Complex lv_fine = levin.template operator()<kFine>(fine, 1);
  const Complex lv_coarse = levin.template operator()<9>(coarse, 2);
  const double lv_err = std::abs(lv_fine - lv_coarse);
  if (std::isfinite(lv_err) && std::isfinite(std::abs(lv_fine)) && lv_err < cc_err) {
    best.value = lv_fine;
    best.error = lv_err;
  }
  return best;
}

}  // namespace detail

/// Integral of amplitude(x) * exp(i phase(x)) over [a, b]. `dphase` must be
/// the exact derivative of `phase`; amplitude should be smooth on the scale
/// of the panels (no oscillation beyond what phase carries).
template <typename Amp, typename Phase, typename DPhase>
Estimate<Complex> integrate_oscillatory(Amp&& amplitude, Phase&& phase, DPhase&& dphase,
                                        std::span<const double> breakpoints, const Tolerance& tol,
                                        PanelRule mode = PanelRule::Auto) {
  auto rule = [&](double a, double b) {
    return detail::oscillatory_panel(amplitude, phase, dphase, a, b, mode);
  };
  return detail::refine<Complex>(rule, breakpoints, tol, 17);
}

template <typename Amp, typename Phase, typename DPhase>
Estimate<Complex> integrate_oscillatory(Amp&& amplitude, Phase&& phase, DPhase&& dphase, double a,
                                        double b, const Tolerance& tol,
                                        PanelRule mode = PanelRule::Auto) {
  const std::array<double, 2> bp{a, b};
  return integrate_oscillatory(std::forward<Amp>(amplitude), std::forward<Phase>(phase),
                               std::forward<DPhase>(dphase), std::span<const double>(bp), tol, mode);
}

/// Uniform partition of [a, b] into n panels.
std::vector<double> uniform_breakpoints(double a, double b, int n);

}  // namespace udw::quad
