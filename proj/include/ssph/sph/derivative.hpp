#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ssph/common/vec2.hpp"
#include "ssph/sph/kernel.hpp"
#include "ssph/sph/neighbors.hpp"
#include "ssph/sph/particles.hpp"

namespace ssph::sph {

/// Row-major 2x2 matrix; one-dimensional problems use only xx.
struct Mat2 {
  double xx = 1.0, xy = 0.0, yx = 0.0, yy = 1.0;

  Vec2 operator*(const Vec2 &v) const { return {xx * v.x + xy * v.y, yx * v.x + yy * v.y}; }
  static Mat2 identity() { return {}; }
};

struct CorrectionEntry {
  Mat2 matrix;            // B_j, or identity when fallback is set
  Mat2 moment;            // sum_k V_k gradW_jk (x_k - x_j)^T
  bool fallback = false;  // moment matrix singular or above the condition cap
};

inline constexpr double kDefaultConditionCap = 1e12;

/// Moment matrix M_j = sum_k V_k gradW(x_j - x_k) (x_k - x_j)^T and its inverse
/// B_j. With this orientation the corrected gradient B_j * sum_k V_k (u_k - u_j)
/// gradW reproduces linear fields exactly.
CorrectionEntry correction_matrix(const ParticleSystem &system, const NeighborLists &neighbors,
                                  const SmoothingKernel &kernel, std::size_t j,
                                  double condition_cap = kDefaultConditionCap);

/// Precomputed symmetric SPH first-derivative operator
///
///   D_j u = [B_j] sum_{k in N(j)} V_k (u_k - u_j) gradW(x_j - x_k).
///
/// Pair weights are stored once per neighbour configuration, so applying the
/// operator is a sparse pass over the neighbour lists. Rows are independent,
/// and each row sums its neighbours in list order, so results do not depend
/// on the thread count.
class DerivativeOperator {
 public:
  DerivativeOperator() = default;
  DerivativeOperator(const ParticleSystem &system, const NeighborLists &neighbors,
                     const SmoothingKernel &kernel, bool corrected,
                     double condition_cap = kDefaultConditionCap);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  int dim() const { return dim_; }
  bool corrected() const { return corrected_; }

  void apply(std::span<const double> values, Axis axis, std::span<double> out) const;
  void gradient(std::span<const double> values, std::span<double> out_x,
                std::span<double> out_y) const;

  /// Particles whose moment matrix was singular (identity fallback used).
  std::span<const std::uint8_t> fallback_flags() const { return fallback_; }
  std::size_t fallback_count() const;

 private:
  int dim_ = 1;
  bool corrected_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> neighbor_;
  std::vector<double> wx_;
  std::vector<double> wy_;
  std::vector<std::uint8_t> fallback_;
};

std::vector<double> sph_derivative(std::span<const double> values, const ParticleSystem &system,
                                   const NeighborLists &neighbors, const SmoothingKernel &kernel,
                                   Axis axis, bool corrected);

/// Second derivative along one axis by applying the first-derivative operator
/// twice.
std::vector<double> second_derivative_nested(std::span<const double> values,
                                             const ParticleSystem &system,
                                             const NeighborLists &neighbors,
                                             const SmoothingKernel &kernel, Axis axis,
                                             bool corrected);

}  // namespace ssph::sph
