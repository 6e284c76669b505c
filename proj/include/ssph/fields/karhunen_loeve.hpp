#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ssph/common/vec2.hpp"

namespace ssph::fields {

/// Squared-exponential covariance k(x, x') = variance * exp(-|x - x'|^2 / length^2).
struct CovarianceKernel {
  double variance = 1.0;
  double length = 1.0;

  double operator()(const Vec2 &a, const Vec2 &b) const;
};

struct FixedModes {
  std::size_t count;
};
struct EnergyTarget {
  double fraction;
};
using Truncation = std::variant<FixedModes, EnergyTarget>;

/// Truncated KL expansion sampled on a fixed set of nodes.
struct KLExpansion {
  std::vector<double> mean;
  std::vector<double> weights;
  std::vector<double> eigenvalues;             // kept modes, descending
  std::vector<std::vector<double>> modes;      // modes[k][i] = psi_k(x_i)
  std::vector<double> spectrum;                // every eigenvalue, descending, clipped at 0
  double energy_fraction = 0.0;

  std::size_t size() const { return eigenvalues.size(); }
  std::size_t nodes() const { return mean.size(); }
};

/// Nystrom discretisation of the covariance eigenproblem on `nodes` with
/// quadrature `weights`. `mean` may be empty (zero mean).
KLExpansion kl_decompose(const CovarianceKernel &kernel, std::span<const Vec2> nodes,
                         std::span<const double> weights, Truncation truncation,
                         std::span<const double> mean = {});

/// Same, for an explicit symmetric covariance matrix. `scale` sets the
/// tolerance for clipping round-off negative eigenvalues (-1e-10 * scale).
KLExpansion kl_decompose_matrix(const Eigen::MatrixXd &covariance, std::span<const double> weights,
                                Truncation truncation, std::span<const double> mean,
                                double scale);

/// Squared-exponential kernel on a tensor lattice with product weights.
/// The kernel factorises per axis, so the eigenpairs are products of the 1D
/// Nystrom eigenpairs; equivalent to kl_decompose on the full node set.
/// Node order is x fastest.
KLExpansion kl_decompose_lattice(const CovarianceKernel &kernel, std::span<const double> axis_nodes,
                                 std::span<const double> axis_weights, Truncation truncation,
                                 std::span<const double> mean = {});

/// mean + sum_k sqrt(lambda_k) psi_k xi_k.
std::vector<double> kl_realize(const KLExpansion &expansion, std::span<const double> xi);

/// "k,lambda,cumulative_fraction" for every eigenvalue.
void write_spectrum_csv(std::ostream &os, const KLExpansion &expansion);

/// Trapezoid weights for a lattice of n points per axis with spacing dx;
/// `closed` marks axes whose end points lie on the boundary (half weight).
std::vector<double> lattice_weights(int dim, std::size_t n_per_axis, double dx, bool closed);

}  // namespace ssph::fields
