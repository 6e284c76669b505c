#include "ssph/chaos/tensors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ssph/chaos/grid.hpp"
#include "ssph/common/error.hpp"

namespace ssph::chaos {

std::vector<std::vector<PairTensor::Entry>> PairTensor::column_entries() const {
  std::vector<std::vector<Entry>> cols(n_);
  for (std::size_t l = 0; l < n_; ++l)
    for (std::size_t m = 0; m < n_; ++m)
      if ((*this)(m, l) != 0.0) cols[l].push_back({static_cast<std::uint32_t>(m), (*this)(m, l)});
  return cols;
}

PairTensor PairTensor::identity(std::size_t n, double scale) {
  PairTensor t(n);
  for (std::size_t k = 0; k < n; ++k) t(k, k) = scale;
  return t;
}

TripleTensor::TripleTensor(std::size_t n, std::vector<Entry> entries)
    : n_(n), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const Entry &a, const Entry &b) {
    if (a.l != b.l) return a.l < b.l;
    if (a.i != b.i) return a.i < b.i;
    return a.m < b.m;
  });
  row_start_.assign(n_ + 1, 0);
  for (const auto &e : entries_) ++row_start_[e.l + 1];
  for (std::size_t l = 0; l < n_; ++l) row_start_[l + 1] += row_start_[l];
}

double TripleTensor::operator()(std::size_t i, std::size_t m, std::size_t l) const {
  const auto r = row(l);
  const auto it = std::lower_bound(r.begin(), r.end(), std::pair{i, m}, [](const Entry &e, const auto &key) {
    return e.i != key.first ? e.i < key.first : e.m < key.second;
  });
  if (it != r.end() && it->i == i && it->m == m) return it->value;
  return 0.0;
}

TripleTensor triple_product_tensor(const ChaosBasis &basis) {
  const int q = basis.order();
  const int p = basis.dimension();
  const auto &set = basis.indices();
  const std::size_t n = set.size();

  // Univariate table E[psi_a psi_b psi_c], a,b,c <= q, by Gauss-Hermite
  // quadrature exact to degree 3q.
  const int nodes = std::max(static_cast<int>(basis.rule().size()), (3 * q + 1 + 1) / 2 + 1);
  const QuadratureRule rule = gauss_hermite(nodes);
  const std::size_t w = static_cast<std::size_t>(q) + 1;
  std::vector<double> psi(rule.size() * w);
  for (std::size_t k = 0; k < rule.size(); ++k)
    hermite_all(q, rule.nodes[k], std::span<double>(psi.data() + k * w, w));
  std::vector<double> uni(w * w * w, 0.0);
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = 0; b < w; ++b)
      for (std::size_t c = 0; c < w; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k)
          s += rule.weights[k] * psi[k * w + a] * psi[k * w + b] * psi[k * w + c];
        uni[(a * w + b) * w + c] = std::abs(s) < kTensorMask ? 0.0 : s;
      }

  std::vector<TripleTensor::Entry> entries;
  for (std::size_t l = 0; l < n; ++l) {
    const auto al = set[l];
    for (std::size_t i = 0; i < n; ++i) {
      const auto ai = set[i];
      for (std::size_t m = 0; m < n; ++m) {
        if ((set.total_degree(i) + set.total_degree(m) + set.total_degree(l)) % 2 != 0) continue;
        const auto am = set[m];
        double v = 1.0;
        for (int d = 0; d < p && v != 0.0; ++d)
          v *= uni[(static_cast<std::size_t>(ai[d]) * w + am[d]) * w + al[d]];
        if (std::abs(v) >= kTensorMask)
          entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(m),
                             static_cast<std::uint32_t>(l), v});
      }
    }
  }
  return TripleTensor(n, std::move(entries));
}

PairTensor weighted_pair_tensor(const ChaosBasis &basis, const GermFunction &a,
                                std::span<const int> dims, int nodes) {
  const QuadratureRule rule = gauss_hermite(nodes > 0 ? nodes : default_pair_nodes(basis.order()));
  const SubGrid grid(basis, dims, rule, basis.order());
  const std::size_t n = basis.size();

  std::vector<double> weights;
  std::vector<std::vector<std::size_t>> points;
  weights.reserve(grid.point_count());
  std::vector<double> xi(dims.size());
  grid.for_each_point([&](std::span<const std::size_t> node, double weight) {
    for (std::size_t k = 0; k < dims.size(); ++k) xi[k] = rule.nodes[node[k]];
    const double value = a(xi);
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "coefficient function is not finite at quadrature node (";
      for (std::size_t k = 0; k < xi.size(); ++k) msg << (k ? ", " : "") << xi[k];
      msg << ")";
      throw DomainError(msg.str());
    }
    weights.push_back(weight * value);
    points.emplace_back(node.begin(), node.end());
  });

  PairTensor g2(n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t l = m; l < n; ++l) {
      if (!grid.agree_outside(m, l)) continue;
      double s = 0.0;
      for (std::size_t k = 0; k < points.size(); ++k)
        s += weights[k] * grid.phi(m, points[k]) * grid.phi(l, points[k]);
      if (std::abs(s) < kTensorMask) s = 0.0;
      g2(m, l) = s;
      g2(l, m) = s;
    }
  }
  return g2;
}

PairTensor linear_germ_tensor(const ChaosBasis &basis, int d) {
  const int dims[] = {d};
  return weighted_pair_tensor(
      basis, [](std::span<const double> xi) { return xi[0]; }, dims, basis.order() + 2);
}

void write_triple_csv(std::ostream &os, const TripleTensor &tensor) {
  os << "i,m,l,value\n";
  os << std::setprecision(17);
  for (const auto &e : tensor.entries()) os << e.i << ',' << e.m << ',' << e.l << ',' << e.value << '\n';
}

}  // namespace ssph::chaos
