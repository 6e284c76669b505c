#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace ssph::chaos {

inline constexpr std::size_t kDefaultBasisCap = 20000;

/// binomial(n, k), saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

/// Total-degree multi-index set {alpha in N^p : |alpha| <= q}.
///
/// Ordering is graded: by total degree, and inside one degree in descending
/// lexicographic order, so the zero index is at position 0 and the unit index
/// e_d sits at position d + 1.
class MultiIndexSet {
 public:
  MultiIndexSet(int dimension, int order, std::size_t cap = kDefaultBasisCap);

  int dimension() const { return p_; }
  int order() const { return q_; }
  std::size_t size() const { return count_; }

  std::span<const int> operator[](std::size_t k) const {
    return {flat_.data() + k * static_cast<std::size_t>(p_), static_cast<std::size_t>(p_)};
  }
  int total_degree(std::size_t k) const { return degree_[k]; }

  std::optional<std::size_t> find(std::span<const int> alpha) const;

  /// Position of the first-order index for germ coordinate d (requires q >= 1).
  std::size_t unit_index(int d) const;

 private:
  int p_;
  int q_;
  std::size_t count_ = 0;
  std::vector<int> flat_;
  std::vector<int> degree_;
  std::map<std::vector<int>, std::size_t> lookup_;
};

MultiIndexSet build_multi_index_set(int dimension, int order, std::size_t cap = kDefaultBasisCap);

}  // namespace ssph::chaos
