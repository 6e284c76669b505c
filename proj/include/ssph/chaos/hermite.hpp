#pragma once

#include <span>
#include <vector>

namespace ssph::chaos {

/// Orthonormal probabilists' Hermite polynomial psi_n = He_n / sqrt(n!).
double hermite(int n, double x);

/// psi_0(x) ... psi_{nmax}(x) by the three-term recurrence.
void hermite_all(int nmax, double x, std::span<double> out);

/// Gauss-Hermite rule for the standard normal measure (weights sum to 1).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// n-point rule, exact for polynomials of degree <= 2n - 1.
QuadratureRule gauss_hermite(int n);

/// E[psi_a psi_b psi_c] for a standard normal germ, closed form.
double hermite_triple_closed_form(int a, int b, int c);

}  // namespace ssph::chaos
