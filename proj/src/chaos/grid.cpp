#include "ssph/chaos/grid.hpp"

#include <limits>

#include "ssph/common/error.hpp"

namespace ssph::chaos {

namespace {
constexpr std::size_t kMaxGridPoints = 50'000'000;
}

SubGrid::SubGrid(const ChaosBasis &basis, std::span<const int> dims, const QuadratureRule &rule,
                 int max_degree)
    : basis_(basis), dims_(dims.begin(), dims.end()), rule_(rule), max_degree_(max_degree) {
  const int p = basis.dimension();
  in_dims_.assign(static_cast<std::size_t>(p), 0);
  for (const int d : dims_) {
    if (d < 0 || d >= p) throw ContractViolation("germ coordinate outside the basis dimension");
    if (in_dims_[d]) throw ContractViolation("germ coordinate listed twice");
    in_dims_[d] = 1;
    if (points_ > kMaxGridPoints / rule.size())
      throw CapacityError("tensor quadrature grid too large");
    points_ *= rule.size();
  }
  psi_.resize(rule.size() * static_cast<std::size_t>(max_degree_ + 1));
  for (std::size_t n = 0; n < rule.size(); ++n)
    hermite_all(max_degree_, rule.nodes[n],
                std::span<double>(psi_.data() + n * (max_degree_ + 1), max_degree_ + 1));
}

std::vector<std::size_t> SubGrid::rows_supported() const {
  std::vector<std::size_t> rows;
  const auto &set = basis_.indices();
  for (std::size_t k = 0; k < set.size(); ++k) {
    const auto alpha = set[k];
    bool ok = true;
    for (int d = 0; d < set.dimension() && ok; ++d) ok = in_dims_[d] || alpha[d] == 0;
    if (ok) rows.push_back(k);
  }
  return rows;
}

bool SubGrid::agree_outside(std::size_t m, std::size_t l) const {
  const auto &set = basis_.indices();
  const auto a = set[m];
  const auto b = set[l];
  for (int d = 0; d < set.dimension(); ++d)
    if (!in_dims_[d] && a[d] != b[d]) return false;
  return true;
}

double SubGrid::phi(std::size_t k, std::span<const std::size_t> node) const {
  const auto alpha = basis_.indices()[k];
  double v = 1.0;
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    const int deg = alpha[dims_[a]];
    if (deg != 0) v *= psi_[node[a] * (max_degree_ + 1) + deg];
  }
  return v;
}

void SubGrid::for_each_point(
    const std::function<void(std::span<const std::size_t>, double)> &fn) const {
  const std::size_t k = dims_.size();
  std::vector<std::size_t> node(k, 0);
  for (std::size_t count = 0; count < points_; ++count) {
    double w = 1.0;
    for (std::size_t a = 0; a < k; ++a) w *= rule_.weights[node[a]];
    fn(node, w);
    for (std::size_t a = 0; a < k; ++a) {
      if (++node[a] < rule_.size()) break;
      node[a] = 0;
    }
  }
}

}  // namespace ssph::chaos
