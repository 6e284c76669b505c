#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ssph/chaos/basis.hpp"

namespace ssph::chaos {

/// Tensor quadrature grid over a subset of germ coordinates, with the
/// univariate polynomials tabulated at the nodes. Internal helper shared by
/// projections and coupling tensors.
class SubGrid {
 public:
  SubGrid(const ChaosBasis &basis, std::span<const int> dims, const QuadratureRule &rule,
          int max_degree);

  std::size_t point_count() const { return points_; }

  /// Basis rows whose multi-index is zero outside `dims`.
  std::vector<std::size_t> rows_supported() const;

  /// True when alpha_m and alpha_l agree on every coordinate outside `dims`.
  bool agree_outside(std::size_t m, std::size_t l) const;

  /// Product over `dims` of psi_{alpha_d}(node_d) for basis row k.
  double phi(std::size_t k, std::span<const std::size_t> node) const;

  void for_each_point(const std::function<void(std::span<const std::size_t>, double)> &fn) const;

 private:
  const ChaosBasis &basis_;
  std::vector<int> dims_;
  std::vector<char> in_dims_;
  const QuadratureRule &rule_;
  int max_degree_;
  std::size_t points_ = 1;
  std::vector<double> psi_;  // [node][degree]
};

}  // namespace ssph::chaos
