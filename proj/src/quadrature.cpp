#include "udw/quadrature.hpp"

namespace udw::quad {
namespace detail {

ChebyshevGrid::ChebyshevGrid(int n) : n_intervals(n), nodes(n + 1), cc_weights(n + 1, 0.0) {
  for (int i = 0; i <= n; ++i) nodes[i] = std::cos(kPi * i / n);

  // Clenshaw-Curtis weights; n is even for every grid we build.
  cc_weights[0] = cc_weights[n] = 1.0 / (n * n - 1.0);
  for (int i = 1; i < n; ++i) {
    const double theta = kPi * i / n;
    double v = 1.0;
    for (int k = 1; k < n / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    v -= std::cos(n * theta) / (n * n - 1.0);
    cc_weights[i] = 2.0 * v / n;
  }

  differentiation = Eigen::MatrixXd::Zero(n + 1, n + 1);
  auto weight = [n](int i) { return ((i == 0 || i == n) ? 2.0 : 1.0) * ((i % 2) ? -1.0 : 1.0); };
  for (int i = 0; i <= n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      differentiation(i, j) = weight(i) / weight(j) / (nodes[i] - nodes[j]);
      row_sum += differentiation(i, j);
    }
    differentiation(i, i) = -row_sum;
  }
}

const ChebyshevGrid& grid9() {
  static const ChebyshevGrid g(8);
  return g;
}

const ChebyshevGrid& grid17() {
  static const ChebyshevGrid g(16);
  return g;
}

}  // namespace detail

std::vector<double> uniform_breakpoints(double a, double b, int n) {
  std::vector<double> bp(n + 1);
  for (int i = 0; i <= n; ++i) bp[i] = a + (b - a) * i / n;
  bp[n] = b;
  return bp;
}

}  // namespace udw::quad
