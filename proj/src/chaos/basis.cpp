#include "ssph/chaos/basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssph/chaos/grid.hpp"
#include "ssph/common/error.hpp"

namespace ssph::chaos {

ChaosBasis::ChaosBasis(MultiIndexSet indices, int quadrature_nodes)
    : indices_(std::move(indices)),
      rule_(gauss_hermite(quadrature_nodes > 0 ? quadrature_nodes : 2 * indices_.order() + 2)) {}

std::vector<double> ChaosBasis::eval(std::span<const double> xi) const {
  const int p = dimension();
  const int q = order();
  if (xi.size() != static_cast<std::size_t>(p))
    throw ContractViolation("germ length does not match the basis dimension");
  std::vector<double> table(static_cast<std::size_t>(p) * (q + 1));
  for (int d = 0; d < p; ++d)
    hermite_all(q, xi[d], std::span<double>(table.data() + static_cast<std::size_t>(d) * (q + 1), q + 1));
  std::vector<double> out(size());
  for (std::size_t k = 0; k < size(); ++k) {
    const auto alpha = indices_[k];
    double v = 1.0;
    for (int d = 0; d < p; ++d)
      if (alpha[d] != 0) v *= table[static_cast<std::size_t>(d) * (q + 1) + alpha[d]];
    out[k] = v;
  }
  return out;
}

std::vector<double> eval_basis(const ChaosBasis &basis, std::span<const double> xi) {
  return basis.eval(xi);
}

int default_pair_nodes(int order) { return std::max({4 * order, 2 * order + 2, 20}); }

std::vector<double> project_random_field(const ChaosBasis &basis, const GermFieldFunction &g,
                                         std::size_t n_out, std::span<const int> dims,
                                         int nodes) {
  const QuadratureRule rule = nodes > 0 ? gauss_hermite(nodes) : basis.rule();
  const SubGrid grid(basis, dims, rule, basis.order());
  const auto rows = grid.rows_supported();

  std::vector<double> result(basis.size() * n_out, 0.0);
  std::vector<double> values(n_out);
  std::vector<double> xi(dims.size());
  grid.for_each_point([&](std::span<const std::size_t> node, double weight) {
    for (std::size_t a = 0; a < dims.size(); ++a) xi[a] = rule.nodes[node[a]];
    g(xi, values);
    for (std::size_t o = 0; o < n_out; ++o) {
      if (!std::isfinite(values[o])) {
        std::ostringstream msg;
        msg << "random function is not finite at quadrature node (";
        for (std::size_t a = 0; a < xi.size(); ++a) msg << (a ? ", " : "") << xi[a];
        msg << ") for output " << o;
        throw DomainError(msg.str());
      }
    }
    for (const std::size_t l : rows) {
      const double c = weight * grid.phi(l, node);
      double *row = result.data() + l * n_out;
      for (std::size_t o = 0; o < n_out; ++o) row[o] += c * values[o];
    }
  });
  return result;
}

std::vector<double> project_random_function(const ChaosBasis &basis, const GermFunction &g,
                                            std::span<const int> dims, int nodes) {
  return project_random_field(
      basis, [&](std::span<const double> xi, std::span<double> out) { out[0] = g(xi); }, 1, dims,
      nodes);
}

}  // namespace ssph::chaos
