#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ssph/common/rng.hpp"
#include "ssph/common/vec2.hpp"
#include "ssph/fields/karhunen_loeve.hpp"

namespace ssph::fields {

/// Coefficients of
///   w(x, y) = sum_{i,j=-K..K} a_ij sin(2 pi (i x + j y)) + b_ij cos(2 pi (i x + j y)).
struct FourierCoefficients {
  int max_mode = 4;
  std::vector<double> a;  // (2K+1)^2, index (i + K) * (2K + 1) + (j + K)
  std::vector<double> b;

  explicit FourierCoefficients(int k = 4);
  std::size_t side() const { return static_cast<std::size_t>(2 * max_mode + 1); }
  double &a_at(int i, int j) { return a[index(i, j)]; }
  double &b_at(int i, int j) { return b[index(i, j)]; }
  std::size_t index(int i, int j) const;
};

/// i.i.d. standard normal coefficients, a block first then b.
FourierCoefficients sample_fourier_coefficients(CounterStream &stream, int max_mode = 4);

/// Trigonometric table of the modes at fixed nodes, so each evaluation is a
/// dot product.
class FourierTable {
 public:
  FourierTable(std::span<const Vec2> nodes, int max_mode);

  std::size_t nodes() const { return n_; }
  /// w at every node. With `normalize`, rescaled to max|w| = 2; a field that
  /// is identically zero cannot be normalised and raises DomainError.
  std::vector<double> evaluate(const FourierCoefficients &c, bool normalize) const;

 private:
  std::size_t n_;
  int max_mode_;
  std::vector<double> sin_;  // [mode][node]
  std::vector<double> cos_;
};

std::vector<double> fourier_random_field(std::span<const Vec2> nodes,
                                         const FourierCoefficients &c, bool normalize);

/// KL expansion of the normalised Fourier field from its sample covariance
/// over `draws` realisations (streams 0..draws-1 of `seed`).
KLExpansion fourier_empirical_kl(std::span<const Vec2> nodes, std::span<const double> weights,
                                 std::size_t draws, std::uint64_t seed, Truncation truncation,
                                 int max_mode = 4);

}  // namespace ssph::fields
