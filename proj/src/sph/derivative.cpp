#include "ssph/sph/derivative.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssph/common/error.hpp"
#include "ssph/common/parallel.hpp"

namespace ssph::sph {

namespace {

// Inverse with a condition-number check; returns false when singular.
bool invert(const Mat2 &m, int dim, double cap, Mat2 &out) {
  if (dim == 1) {
    if (!std::isfinite(m.xx) || std::abs(m.xx) < 1e-12) return false;
    out = Mat2{1.0 / m.xx, 0.0, 0.0, 1.0};
    return true;
  }
  const double det = m.xx * m.yy - m.xy * m.yx;
  if (!std::isfinite(det) || std::abs(det) < 1e-300) return false;
  // 2-norm condition number from the singular values of a 2x2 matrix.
  const double fro2 = m.xx * m.xx + m.xy * m.xy + m.yx * m.yx + m.yy * m.yy;
  const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
  const double smax = std::sqrt(0.5 * (fro2 + disc));
  const double smin = std::sqrt(std::max(0.0, 0.5 * (fro2 - disc)));
  if (smin == 0.0 || smax / smin > cap) return false;
  out = Mat2{m.yy / det, -m.xy / det, -m.yx / det, m.xx / det};
  return true;
}

void check_size(std::span<const double> values, std::size_t n) {
  if (values.size() != n)
    throw ContractViolation("derivative input length does not match the particle count");
}

}  // namespace

CorrectionEntry correction_matrix(const ParticleSystem &system, const NeighborLists &neighbors,
                                  const SmoothingKernel &kernel, std::size_t j,
                                  double condition_cap) {
  Mat2 moment{0.0, 0.0, 0.0, 0.0};
  for (const std::uint32_t k : neighbors.of(j)) {
    if (k == j) continue;
    const Vec2 r = system.displacement(j, k);
    const Vec2 g = kernel.gradient(r) * system.volume(k);
    // (x_k - x_j) = -r
    moment.xx -= g.x * r.x;
    moment.xy -= g.x * r.y;
    moment.yx -= g.y * r.x;
    moment.yy -= g.y * r.y;
  }
  CorrectionEntry entry;
  entry.moment = moment;
  if (!invert(moment, system.dim(), condition_cap, entry.matrix)) {
    entry.matrix = Mat2::identity();
    entry.fallback = true;
  }
  return entry;
}

DerivativeOperator::DerivativeOperator(const ParticleSystem &system, const NeighborLists &neighbors,
                                       const SmoothingKernel &kernel, bool corrected,
                                       double condition_cap)
    : dim_(system.dim()), corrected_(corrected) {
  const std::size_t n = system.size();
  if (neighbors.size() != n)
    throw ContractViolation("neighbour lists do not match the particle system");
  offsets_.assign(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t count = 0;
    for (const std::uint32_t k : neighbors.of(j)) count += (k != j);
    offsets_[j + 1] = offsets_[j] + count;
  }
  neighbor_.resize(offsets_[n]);
  wx_.resize(offsets_[n]);
  wy_.resize(offsets_[n]);
  fallback_.assign(n, 0);

  const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1 && n > 2048)
  for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(n); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    Mat2 b = Mat2::identity();
    if (corrected_) {
      const CorrectionEntry entry = correction_matrix(system, neighbors, kernel, j, condition_cap);
      b = entry.matrix;
      fallback_[j] = entry.fallback ? 1 : 0;
    }
    std::size_t slot = offsets_[j];
    for (const std::uint32_t k : neighbors.of(j)) {
      if (k == j) continue;
      const Vec2 g = b * (kernel.gradient(system.displacement(j, k)) * system.volume(k));
      neighbor_[slot] = k;
      wx_[slot] = g.x;
      wy_[slot] = dim_ == 2 ? g.y : 0.0;
      ++slot;
    }
  }
}

std::size_t DerivativeOperator::fallback_count() const {
  return static_cast<std::size_t>(std::count(fallback_.begin(), fallback_.end(), 1));
}

void DerivativeOperator::apply(std::span<const double> values, Axis axis,
                               std::span<double> out) const {
  const std::size_t n = size();
  check_size(values, n);
  if (out.size() != n) throw ContractViolation("derivative output length mismatch");
  const double *w = axis == Axis::X ? wx_.data() : wy_.data();
  const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1 && n > 2048)
  for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(n); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const double uj = values[j];
    double acc = 0.0;
    for (std::size_t s = offsets_[j]; s < offsets_[j + 1]; ++s) acc += w[s] * (values[neighbor_[s]] - uj);
    out[j] = acc;
  }
}

void DerivativeOperator::gradient(std::span<const double> values, std::span<double> out_x,
                                  std::span<double> out_y) const {
  const std::size_t n = size();
  check_size(values, n);
  if (out_x.size() != n || out_y.size() != n)
    throw ContractViolation("derivative output length mismatch");
  const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1 && n > 2048)
  for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(n); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const double uj = values[j];
    double ax = 0.0;
    double ay = 0.0;
    for (std::size_t s = offsets_[j]; s < offsets_[j + 1]; ++s) {
      const double du = values[neighbor_[s]] - uj;
      ax += wx_[s] * du;
      ay += wy_[s] * du;
    }
    out_x[j] = ax;
    out_y[j] = ay;
  }
}

std::vector<double> sph_derivative(std::span<const double> values, const ParticleSystem &system,
                                   const NeighborLists &neighbors, const SmoothingKernel &kernel,
                                   Axis axis, bool corrected) {
  check_size(values, system.size());
  const DerivativeOperator op(system, neighbors, kernel, corrected);
  std::vector<double> out(values.size());
  op.apply(values, axis, out);
  return out;
}

std::vector<double> second_derivative_nested(std::span<const double> values,
                                             const ParticleSystem &system,
                                             const NeighborLists &neighbors,
                                             const SmoothingKernel &kernel, Axis axis,
                                             bool corrected) {
  check_size(values, system.size());
  const DerivativeOperator op(system, neighbors, kernel, corrected);
  std::vector<double> first(values.size());
  std::vector<double> second(values.size());
  op.apply(values, axis, first);
  op.apply(first, axis, second);
  return second;
}

}  // namespace ssph::sph
