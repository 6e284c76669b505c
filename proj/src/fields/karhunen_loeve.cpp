#include "ssph/fields/karhunen_loeve.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ssph/common/error.hpp"

namespace ssph::fields {

double CovarianceKernel::operator()(const Vec2 &a, const Vec2 &b) const {
  const Vec2 d = a - b;
  return variance * std::exp(-dot(d, d) / (length * length));
}

KLExpansion kl_decompose(const CovarianceKernel &kernel, std::span<const Vec2> nodes,
                         std::span<const double> weights, Truncation truncation,
                         std::span<const double> mean) {
  if (!(kernel.variance >= 0.0) || !(kernel.length > 0.0))
    throw ConfigError("covariance needs variance >= 0 and length > 0");
  const std::size_t n = nodes.size();
  Eigen::MatrixXd c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= i; ++k) c(i, k) = c(k, i) = kernel(nodes[i], nodes[k]);
  return kl_decompose_matrix(c, weights, truncation, mean, kernel.variance);
}

KLExpansion kl_decompose_matrix(const Eigen::MatrixXd &covariance, std::span<const double> weights,
                                Truncation truncation, std::span<const double> mean,
                                double scale) {
  const std::size_t n = static_cast<std::size_t>(covariance.rows());
  if (n == 0) throw ConfigError("KL decomposition needs at least one node");
  if (covariance.cols() != covariance.rows() || weights.size() != n)
    throw ContractViolation("covariance and weight sizes differ");
  if (!mean.empty() && mean.size() != n) throw ContractViolation("mean has wrong length");
  for (const double w : weights)
    if (!(w > 0.0)) throw ConfigError("quadrature weights must be positive");

  Eigen::VectorXd sw(n);
  for (std::size_t i = 0; i < n; ++i) sw[i] = std::sqrt(weights[i]);
  const Eigen::MatrixXd a = sw.asDiagonal() * covariance * sw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("KL eigensolver did not converge");

  const double clip = -1e-10 * std::max(scale, 0.0);
  KLExpansion kl;
  kl.mean.assign(n, 0.0);
  if (!mean.empty()) std::copy(mean.begin(), mean.end(), kl.mean.begin());
  kl.weights.assign(weights.begin(), weights.end());
  kl.spectrum.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double v = solver.eigenvalues()[static_cast<Eigen::Index>(n - 1 - k)];
    if (v < 0.0) {
      if (v < clip) {
        std::ostringstream msg;
        msg << "covariance is not positive semidefinite (eigenvalue " << v << ")";
        throw NumericalError(msg.str());
      }
      v = 0.0;
    }
    kl.spectrum[k] = v;
  }
  double total = 0.0;
  for (const double v : kl.spectrum) total += v;

  std::size_t m = 0;
  if (const auto *fixed = std::get_if<FixedModes>(&truncation)) {
    if (fixed->count > n) throw ConfigError("more KL modes requested than nodes");
    m = fixed->count;
  } else {
    const double target = std::get<EnergyTarget>(truncation).fraction;
    double acc = 0.0;
    while (m < n && (total <= 0.0 || acc / total < target)) acc += kl.spectrum[m++];
    if (total > 0.0 && acc / total < target) {
      std::ostringstream msg;
      msg << "energy target " << target << " unreachable; all " << n << " modes capture "
          << acc / total;
      throw ConfigError(msg.str());
    }
  }

  double kept = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    kept += kl.spectrum[k];
    kl.eigenvalues.push_back(kl.spectrum[k]);
    const Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(n - 1 - k));
    std::vector<double> psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = v[i] / sw[i];
    // Fix the sign: first non-negligible entry positive.
    const double big = v.cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v[i]) > 1e-8 * big) {
        if (v[i] < 0.0)
          for (double &x : psi) x = -x;
        break;
      }
    }
    kl.modes.push_back(std::move(psi));
  }
  kl.energy_fraction = total > 0.0 ? kept / total : 1.0;
  return kl;
}

KLExpansion kl_decompose_lattice(const CovarianceKernel &kernel, std::span<const double> axis_nodes,
                                 std::span<const double> axis_weights, Truncation truncation,
                                 std::span<const double> mean) {
  const std::size_t m = axis_nodes.size();
  std::vector<Vec2> line(m);
  for (std::size_t i = 0; i < m; ++i) line[i] = {axis_nodes[i], 0.0};
  const CovarianceKernel unit{1.0, kernel.length};
  const KLExpansion axis = kl_decompose(unit, line, axis_weights, FixedModes{m});

  struct Pair {
    double value;
    std::size_t a, b;
  };
  std::vector<Pair> pairs;
  pairs.reserve(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      pairs.push_back({kernel.variance * axis.spectrum[a] * axis.spectrum[b], a, b});
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair &p, const Pair &q) { return p.value > q.value; });

  const std::size_t n = m * m;
  if (!mean.empty() && mean.size() != n) throw ContractViolation("mean has wrong length");
  KLExpansion kl;
  kl.mean.assign(n, 0.0);
  if (!mean.empty()) std::copy(mean.begin(), mean.end(), kl.mean.begin());
  kl.weights.resize(n);
  for (std::size_t iy = 0; iy < m; ++iy)
    for (std::size_t ix = 0; ix < m; ++ix) kl.weights[iy * m + ix] = axis_weights[ix] * axis_weights[iy];
  double total = 0.0;
  for (const auto &p : pairs) {
    kl.spectrum.push_back(p.value);
    total += p.value;
  }

  std::size_t keep = 0;
  if (const auto *fixed = std::get_if<FixedModes>(&truncation)) {
    if (fixed->count > n) throw ConfigError("more KL modes requested than nodes");
    keep = fixed->count;
  } else {
    const double target = std::get<EnergyTarget>(truncation).fraction;
    double acc = 0.0;
    while (keep < n && (total <= 0.0 || acc / total < target)) acc += kl.spectrum[keep++];
    if (total > 0.0 && acc / total < target) {
      std::ostringstream msg;
      msg << "energy target " << target << " unreachable; all modes capture " << acc / total;
      throw ConfigError(msg.str());
    }
  }
  double kept = 0.0;
  for (std::size_t k = 0; k < keep; ++k) {
    const auto &p = pairs[k];
    kept += p.value;
    kl.eigenvalues.push_back(p.value);
    std::vector<double> psi(n);
    for (std::size_t iy = 0; iy < m; ++iy)
      for (std::size_t ix = 0; ix < m; ++ix)
        psi[iy * m + ix] = axis.modes[p.a][ix] * axis.modes[p.b][iy];
    kl.modes.push_back(std::move(psi));
  }
  kl.energy_fraction = total > 0.0 ? kept / total : 1.0;
  return kl;
}

std::vector<double> kl_realize(const KLExpansion &expansion, std::span<const double> xi) {
  if (xi.size() != expansion.size()) throw ContractViolation("germ length differs from KL modes");
  std::vector<double> out = expansion.mean;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double s = std::sqrt(expansion.eigenvalues[k]) * xi[k];
    const auto &psi = expansion.modes[k];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * psi[i];
  }
  return out;
}

void write_spectrum_csv(std::ostream &os, const KLExpansion &expansion) {
  double total = 0.0;
  for (const double v : expansion.spectrum) total += v;
  os << "k,lambda,cumulative_fraction\n" << std::setprecision(17);
  double acc = 0.0;
  for (std::size_t k = 0; k < expansion.spectrum.size(); ++k) {
    acc += expansion.spectrum[k];
    os << k + 1 << ',' << expansion.spectrum[k] << ',' << (total > 0.0 ? acc / total : 1.0)
       << '\n';
  }
}

std::vector<double> lattice_weights(int dim, std::size_t n_per_axis, double dx, bool closed) {
  std::vector<double> axis(n_per_axis, dx);
  if (closed && n_per_axis > 1) axis.front() = axis.back() = 0.5 * dx;
  if (dim == 1) return axis;
  std::vector<double> w;
  w.reserve(n_per_axis * n_per_axis);
  // Lattice order: x fastest.
  for (std::size_t iy = 0; iy < n_per_axis; ++iy)
    for (std::size_t ix = 0; ix < n_per_axis; ++ix) w.push_back(axis[ix] * axis[iy]);
  return w;
}

}  // namespace ssph::fields
