#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ssph/chaos/basis.hpp"

namespace ssph::chaos {

inline constexpr double kTensorMask = 1e-12;

/// Dense second-order coupling G2[m][l] = E[a(xi) Phi_m Phi_l]; entries with
/// magnitude below kTensorMask are stored as exact zeros.
class PairTensor {
 public:
  PairTensor() = default;
  explicit PairTensor(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t m, std::size_t l) const { return data_[m * n_ + l]; }
  double &operator()(std::size_t m, std::size_t l) { return data_[m * n_ + l]; }
  std::span<const double> data() const { return data_; }

  /// Nonzero pattern per output row l: pairs (m, value).
  struct Entry {
    std::uint32_t m;
    double value;
  };
  std::vector<std::vector<Entry>> column_entries() const;

  static PairTensor identity(std::size_t n, double scale = 1.0);

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Sparse third-order tensor G3[i][m][l] = E[Phi_i Phi_m Phi_l]. Entries are
/// kept for every index permutation, sorted by (l, i, m).
class TripleTensor {
 public:
  struct Entry {
    std::uint32_t i;
    std::uint32_t m;
    std::uint32_t l;
    double value;
  };

  TripleTensor() = default;
  TripleTensor(std::size_t n, std::vector<Entry> entries);

  std::size_t size() const { return n_; }
  std::span<const Entry> entries() const { return entries_; }
  /// Entries with output index l.
  std::span<const Entry> row(std::size_t l) const {
    return {entries_.data() + row_start_[l], row_start_[l + 1] - row_start_[l]};
  }
  double operator()(std::size_t i, std::size_t m, std::size_t l) const;

 private:
  std::size_t n_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_start_;
};

/// E[Phi_i Phi_m Phi_l] by Gauss-Hermite quadrature applied per germ
/// dimension (the integrand factorises across dimensions).
TripleTensor triple_product_tensor(const ChaosBasis &basis);

/// G2 by tensor Gauss-Hermite quadrature over the germ coordinates `dims`
/// that `a` depends on. `nodes` <= 0 picks default_pair_nodes(q).
PairTensor weighted_pair_tensor(const ChaosBasis &basis, const GermFunction &a,
                                std::span<const int> dims, int nodes = 0);

/// E[xi_d Phi_m Phi_l]: couples chaos rows through a field that is linear in
/// germ coordinate d (Karhunen-Loeve coefficients).
PairTensor linear_germ_tensor(const ChaosBasis &basis, int d);

/// CSV dump "i,m,l,value" using flat graded indices.
void write_triple_csv(std::ostream &os, const TripleTensor &tensor);

}  // namespace ssph::chaos
