#include "ssph/chaos/multi_index.hpp"

#include <limits>
#include <numeric>
#include <sstream>

#include "ssph/common/error.hpp"

namespace ssph::chaos {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    // result * num / i is exact at every step; guard the multiplication.
    const std::size_t g = std::gcd(result, i);
    const std::size_t r = result / g;
    const std::size_t d = i / g;
    const std::size_t nn = num / d;
    if (r != 0 && nn > std::numeric_limits<std::size_t>::max() / r)
      return std::numeric_limits<std::size_t>::max();
    result = r * nn;
  }
  return result;
}

namespace {

// Append all compositions of `remaining` into the slots [pos, p) in
// descending lexicographic order.
void compositions(std::vector<int> &current, std::size_t pos, int remaining,
                  std::vector<int> &flat) {
  const std::size_t p = current.size();
  if (pos + 1 == p) {
    current[pos] = remaining;
    flat.insert(flat.end(), current.begin(), current.end());
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    current[pos] = v;
    compositions(current, pos + 1, remaining - v, flat);
  }
  current[pos] = 0;
}

}  // namespace

MultiIndexSet::MultiIndexSet(int dimension, int order, std::size_t cap) : p_(dimension), q_(order) {
  if (p_ < 1) throw ConfigError("multi-index dimension must be at least 1");
  if (q_ < 0) throw ConfigError("multi-index order must be non-negative");
  const std::size_t count = binomial(static_cast<std::size_t>(p_ + q_), static_cast<std::size_t>(q_));
  if (count > cap) {
    std::ostringstream msg;
    msg << "total-degree basis with p=" << p_ << ", q=" << q_ << " has " << count
        << " functions, above the cap of " << cap
        << "; reduce the stochastic dimension first (e.g. compress the random field with a "
           "Karhunen-Loeve expansion) instead of expanding every random coefficient";
    throw CapacityError(msg.str());
  }
  count_ = count;
  flat_.reserve(count_ * static_cast<std::size_t>(p_));
  std::vector<int> current(static_cast<std::size_t>(p_), 0);
  for (int d = 0; d <= q_; ++d) compositions(current, 0, d, flat_);
  degree_.resize(count_);
  for (std::size_t k = 0; k < count_; ++k) {
    const auto alpha = (*this)[k];
    degree_[k] = std::accumulate(alpha.begin(), alpha.end(), 0);
    lookup_.emplace(std::vector<int>(alpha.begin(), alpha.end()), k);
  }
}

std::optional<std::size_t> MultiIndexSet::find(std::span<const int> alpha) const {
  if (alpha.size() != static_cast<std::size_t>(p_)) return std::nullopt;
  const auto it = lookup_.find(std::vector<int>(alpha.begin(), alpha.end()));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t MultiIndexSet::unit_index(int d) const {
  if (q_ < 1 || d < 0 || d >= p_) throw ContractViolation("unit index requested outside the set");
  return static_cast<std::size_t>(d) + 1;
}

MultiIndexSet build_multi_index_set(int dimension, int order, std::size_t cap) {
  return MultiIndexSet(dimension, order, cap);
}

}  // namespace ssph::chaos
