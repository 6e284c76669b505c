#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ssph/chaos/hermite.hpp"
#include "ssph/chaos/multi_index.hpp"

namespace ssph::chaos {

/// Orthonormal Hermite chaos on a total-degree index set.
class ChaosBasis {
 public:
  /// `quadrature_nodes` <= 0 selects the default 2q + 2 nodes per dimension.
  explicit ChaosBasis(MultiIndexSet indices, int quadrature_nodes = 0);

  const MultiIndexSet &indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  int dimension() const { return indices_.dimension(); }
  int order() const { return indices_.order(); }
  const QuadratureRule &rule() const { return rule_; }

  /// Phi_alpha(xi) for every alpha in the set.
  std::vector<double> eval(std::span<const double> xi) const;

 private:
  MultiIndexSet indices_;
  QuadratureRule rule_;
};

std::vector<double> eval_basis(const ChaosBasis &basis, std::span<const double> xi);

/// Scalar function of the germ coordinates listed in `dims` (in that order).
using GermFunction = std::function<double(std::span<const double>)>;

/// Vector-valued germ function: fills `out` (fixed length) for the given
/// sub-germ.
using GermFieldFunction = std::function<void(std::span<const double> xi, std::span<double> out)>;

/// Tensor Gauss-Hermite grid over a subset of germ coordinates.
struct GermGrid {
  std::vector<int> dims;
  QuadratureRule rule;
};

int default_pair_nodes(int order);

/// ghat_l = E[g(xi) Phi_l(xi)] for a function depending only on the germ
/// coordinates `dims`. Rows involving other coordinates vanish exactly.
/// `g` receives the selected coordinates only, in the order given by `dims`.
/// `nodes` <= 0 uses the basis rule.
std::vector<double> project_random_function(const ChaosBasis &basis, const GermFunction &g,
                                            std::span<const int> dims, int nodes = 0);

/// Projection of a vector of random quantities sharing one germ subset.
/// Returns a row-major (basis size) x n_out matrix.
std::vector<double> project_random_field(const ChaosBasis &basis, const GermFieldFunction &g,
                                         std::size_t n_out, std::span<const int> dims,
                                         int nodes = 0);

}  // namespace ssph::chaos
