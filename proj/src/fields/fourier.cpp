#include "ssph/fields/fourier.hpp"

#include <cmath>
#include <numbers>

#include "ssph/common/error.hpp"

namespace ssph::fields {

FourierCoefficients::FourierCoefficients(int k) : max_mode(k) {
  if (k < 0) throw ConfigError("Fourier mode range must be non-negative");
  a.assign(side() * side(), 0.0);
  b.assign(side() * side(), 0.0);
}

std::size_t FourierCoefficients::index(int i, int j) const {
  if (std::abs(i) > max_mode || std::abs(j) > max_mode)
    throw ContractViolation("Fourier mode outside the declared range");
  return static_cast<std::size_t>(i + max_mode) * side() + static_cast<std::size_t>(j + max_mode);
}

FourierCoefficients sample_fourier_coefficients(CounterStream &stream, int max_mode) {
  FourierCoefficients c(max_mode);
  for (double &v : c.a) v = stream.normal();
  for (double &v : c.b) v = stream.normal();
  return c;
}

FourierTable::FourierTable(std::span<const Vec2> nodes, int max_mode)
    : n_(nodes.size()), max_mode_(max_mode) {
  const std::size_t side = static_cast<std::size_t>(2 * max_mode + 1);
  sin_.resize(side * side * n_);
  cos_.resize(side * side * n_);
  std::size_t mode = 0;
  for (int i = -max_mode; i <= max_mode; ++i)
    for (int j = -max_mode; j <= max_mode; ++j, ++mode)
      for (std::size_t p = 0; p < n_; ++p) {
        const double phase = 2.0 * std::numbers::pi * (i * nodes[p].x + j * nodes[p].y);
        sin_[mode * n_ + p] = std::sin(phase);
        cos_[mode * n_ + p] = std::cos(phase);
      }
}

std::vector<double> FourierTable::evaluate(const FourierCoefficients &c, bool normalize) const {
  if (c.max_mode != max_mode_) throw ContractViolation("Fourier mode range differs from table");
  std::vector<double> w(n_, 0.0);
  for (std::size_t mode = 0; mode < c.a.size(); ++mode) {
    const double a = c.a[mode];
    const double b = c.b[mode];
    const double *s = sin_.data() + mode * n_;
    const double *co = cos_.data() + mode * n_;
    for (std::size_t p = 0; p < n_; ++p) w[p] += a * s[p] + b * co[p];
  }
  if (normalize) {
    double peak = 0.0;
    for (const double v : w) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) throw DomainError("cannot normalise an identically zero Fourier field");
    for (double &v : w) v = (2.0 * v) / peak;
  }
  return w;
}

std::vector<double> fourier_random_field(std::span<const Vec2> nodes,
                                         const FourierCoefficients &c, bool normalize) {
  return FourierTable(nodes, c.max_mode).evaluate(c, normalize);
}

KLExpansion fourier_empirical_kl(std::span<const Vec2> nodes, std::span<const double> weights,
                                 std::size_t draws, std::uint64_t seed, Truncation truncation,
                                 int max_mode) {
  if (draws < 2) throw ConfigError("empirical covariance needs at least two draws");
  const FourierTable table(nodes, max_mode);
  const std::size_t n = nodes.size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(draws), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < draws; ++s) {
    CounterStream stream(seed, s);
    const auto w = table.evaluate(sample_fourier_coefficients(stream, max_mode), true);
    for (std::size_t p = 0; p < n; ++p) x(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(p)) = w[p];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  std::vector<double> m(mean.data(), mean.data() + n);
  if (draws >= n) {
    Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(draws - 1);
    return kl_decompose_matrix(cov, weights, truncation, m, cov.diagonal().maxCoeff());
  }
  // Snapshot form: the nonzero spectrum of A^T A equals that of A A^T with
  // A = X W^(1/2) / sqrt(S - 1).
  Eigen::VectorXd sw(static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < n; ++p) sw[static_cast<Eigen::Index>(p)] = std::sqrt(weights[p]);
  const Eigen::MatrixXd a = (x * sw.asDiagonal()) / std::sqrt(static_cast<double>(draws - 1));
  const Eigen::MatrixXd gram = a * a.transpose();
  std::vector<double> unit(draws, 1.0);
  // Reuse the generic routine on the small problem (unit weights), then lift
  // the eigenvectors back to the nodes.
  KLExpansion small = kl_decompose_matrix(gram, unit, FixedModes{draws}, {}, gram.diagonal().maxCoeff());
  KLExpansion kl;
  kl.mean = m;
  kl.weights.assign(weights.begin(), weights.end());
  kl.spectrum = small.spectrum;
  kl.spectrum.resize(n, 0.0);
  double total = 0.0;
  for (const double v : kl.spectrum) total += v;
  std::size_t keep = 0;
  if (const auto *fixed = std::get_if<FixedModes>(&truncation)) {
    keep = fixed->count;
  } else {
    const double target = std::get<EnergyTarget>(truncation).fraction;
    double acc = 0.0;
    while (keep < n && (total <= 0.0 || acc / total < target)) acc += kl.spectrum[keep++];
  }
  if (keep > draws) throw ConfigError("more KL modes requested than independent draws");
  double kept = 0.0;
  for (std::size_t k = 0; k < keep; ++k) {
    const double lambda = kl.spectrum[k];
    kept += lambda;
    kl.eigenvalues.push_back(lambda);
    Eigen::Map<const Eigen::VectorXd> g(small.modes[k].data(), static_cast<Eigen::Index>(draws));
    Eigen::VectorXd v = a.transpose() * g;
    const double norm = v.norm();
    std::vector<double> psi(n, 0.0);
    if (norm > 0.0) {
      v /= norm;
      const double big = v.cwiseAbs().maxCoeff();
      for (std::size_t p = 0; p < n; ++p)
        if (std::abs(v[static_cast<Eigen::Index>(p)]) > 1e-8 * big) {
          if (v[static_cast<Eigen::Index>(p)] < 0.0) v = -v;
          break;
        }
      for (std::size_t p = 0; p < n; ++p) psi[p] = v[static_cast<Eigen::Index>(p)] / sw[static_cast<Eigen::Index>(p)];
    }
    kl.modes.push_back(std::move(psi));
  }
  kl.energy_fraction = total > 0.0 ? kept / total : 1.0;
  return kl;
}

}  // namespace ssph::fields
