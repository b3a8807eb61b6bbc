#pragma once

// Two-level detector coupled to one truncated field mode, evolved exactly
// (up to time stepping) in the interaction picture. Detector basis index 0 is
// |g>, 1 is |e>; the joint basis is |detector> (x) |n> with index
// detector * (n_max + 1) + n.

#include <span>
#include <vector>

#include "udw/response.hpp"
#include "udw/types.hpp"

namespace udw::nonpert {

using Matrix = Eigen::MatrixXcd;

Eigen::Matrix2cd sigma_plus();
Eigen::Matrix2cd sigma_minus();
/// sigma+ sigma-, the projector onto |e>.
Eigen::Matrix2cd excited_projector();
/// Interaction-picture monopole sigma+ e^{i Omega tau} + sigma- e^{-i Omega tau}.
Eigen::Matrix2cd monopole(double gap, double tau);

/// exp(-i h G) for Hermitian G.
Matrix hermitian_exp(const Matrix& G, double h);
/// Largest singular value.
double operator_norm(const Matrix& m);
/// ||U^dagger U - 1||.
double unitarity_defect(const Matrix& u);

class TruncatedMode {
 public:
  TruncatedMode(const Vec3d& k, const FieldSpec& field, int n_max = 6);

  const Vec3d& k() const { return k_; }
  int n_max() const { return n_max_; }
  int size() const { return n_max_ + 1; }
  /// c |k|.
  double frequency() const { return omega_; }

  Matrix annihilation() const;
  Matrix creation() const;
  Matrix number() const;
  /// omega a^dagger a; the zero-point term is dropped.
  Matrix free_hamiltonian() const;
  /// exp(-i k.x) / sqrt((2 pi)^d 2 omega / c).
  Complex mode_function(const Vec3d& x) const;
  /// u_k(x) e^{i omega t} a^dagger + conj(u_k(x)) e^{-i omega t} a.
  Matrix field(double t, const Vec3d& x) const;
  /// max |[a, a^dagger] - 1| over the first n_max levels.
  double commutator_defect() const;

 private:
  Vec3d k_;
  int dimension_;
  double c_;
  double omega_;
  int n_max_;
};

struct ConjugationReport {
  double theta = 0.0;
  /// max |e^{i theta P} sigma+ e^{-i theta P} - e^{i theta} sigma+|.
  double detector_deviation = 0.0;
  /// Same for a^dagger with the number operator, on levels below n_max - 1.
  double mode_deviation = 0.0;
  /// max |mu(tau) - mu(tau)^dagger| at tau = theta.
  double hermiticity_defect = 0.0;
  bool pass = false;
};

ConjugationReport conjugation_identities_check(double theta, double tol = 1e-12, int n_max = 6);

enum class TimeGrid { Proper, Lab };

struct SingleMode {
  Scenario scenario;
  Vec3d k = Vec3d::UnitX();
  int n_max = 6;

  /// Proper-time window carrying the switching, and the same window in lab
  /// time.
  std::pair<double, double> proper_window() const;
  std::pair<double, double> lab_window() const;
};

/// Time-ordered product of exponential-midpoint steps over `steps` uniform
/// steps of the chosen time parameter. Throws StepTooCoarse when a step turns
/// the phase by more than 0.1 rad.
Matrix evolve(const SingleMode& m, double lambda, int steps, TimeGrid grid);
/// Richardson combination (4 U(2 steps) - U(steps)) / 3.
Matrix evolve_extrapolated(const SingleMode& m, double lambda, int steps, TimeGrid grid);

/// Probability of finding the detector excited after U acting on |g, 0>.
double excitation_probability(const Matrix& u, int n_max);

/// <e, 1| U^(1) |g, 0> = -i c lambda int dtau chi mu_eg(tau) u_k(x) e^{i omega t}.
Complex dyson_first_order(const SingleMode& m, double lambda);

struct ConsistencyReport {
  std::vector<double> lambdas;
  std::vector<double> p_exact;
  std::vector<double> p_dyson;
  std::vector<double> relative_deviation;
  /// Least-squares slope of log deviation against log lambda.
  double slope = 0.0;
  bool pass = false;
};

/// Needs at least three distinct couplings spanning a factor of 2 and
/// nonzero deviations, else FitFailure.
ConsistencyReport perturbative_consistency(const SingleMode& m, std::span<const double> lambdas, int steps);

}  // namespace udw::nonpert
