#include "ssph/chaos/hermite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ssph/common/error.hpp"

namespace ssph::chaos {

void hermite_all(int nmax, double x, std::span<double> out) {
  if (nmax < 0) return;
  out[0] = 1.0;
  if (nmax >= 1) out[1] = x;
  for (int n = 1; n < nmax; ++n)
    out[n + 1] = (x * out[n] - std::sqrt(static_cast<double>(n)) * out[n - 1]) /
                 std::sqrt(static_cast<double>(n + 1));
}

double hermite(int n, double x) {
  if (n < 0) throw ContractViolation("negative polynomial degree");
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  hermite_all(n, x, values);
  return values[static_cast<std::size_t>(n)];
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw ConfigError("quadrature needs at least one node");
  // Golub-Welsch on the Jacobi matrix of the orthonormal recurrence, then
  // Newton polishing and weights from the Christoffel function.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.nodes.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::vector<double> psi(static_cast<std::size_t>(n) + 1);
  for (double &x : rule.nodes) {
    for (int it = 0; it < 3; ++it) {
      hermite_all(n, x, psi);
      const double deriv = std::sqrt(static_cast<double>(n)) * psi[static_cast<std::size_t>(n) - 1];
      if (deriv == 0.0) break;
      x -= psi[static_cast<std::size_t>(n)] / deriv;
    }
  }
  // Symmetrise so odd moments vanish to rounding.
  for (int k = 0; k < n / 2; ++k) {
    const double a = 0.5 * (rule.nodes[n - 1 - k] - rule.nodes[k]);
    rule.nodes[k] = -a;
    rule.nodes[n - 1 - k] = a;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    hermite_all(n - 1, rule.nodes[i], psi);
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += psi[k] * psi[k];
    rule.weights[i] = 1.0 / s;
  }
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double &w : rule.weights) w /= total;
  return rule;
}

double hermite_triple_closed_form(int a, int b, int c) {
  const int sum = a + b + c;
  if (sum % 2 != 0) return 0.0;
  const int s = sum / 2;
  if (s < a || s < b || s < c) return 0.0;
  // sqrt(a! b! c!) / ((s-a)! (s-b)! (s-c)!) in log space.
  const double log_value = 0.5 * (std::lgamma(a + 1.0) + std::lgamma(b + 1.0) + std::lgamma(c + 1.0)) -
                           std::lgamma(s - a + 1.0) - std::lgamma(s - b + 1.0) -
                           std::lgamma(s - c + 1.0);
  return std::exp(log_value);
}

}  // namespace ssph::chaos
