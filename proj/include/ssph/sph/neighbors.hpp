#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ssph/sph/particles.hpp"

namespace ssph::sph {

/// Compressed per-particle neighbour lists. Each list is sorted by index and
/// contains the particle itself.
class NeighborLists {
 public:
  NeighborLists() = default;
  NeighborLists(std::vector<std::size_t> offsets, std::vector<std::uint32_t> indices,
                std::size_t stamp);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const std::uint32_t> of(std::size_t j) const {
    return {indices_.data() + offsets_[j], offsets_[j + 1] - offsets_[j]};
  }
  std::size_t stamp() const { return stamp_; }
  std::size_t total_pairs() const { return indices_.size(); }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> indices_;
  std::size_t stamp_ = 0;
};

/// All k with dist(x_j, x_k) <= search radius, via a uniform cell grid of cell
/// size >= search radius. Distances use the system's displacement(), so the
/// periodic case follows the minimum-image convention.
NeighborLists generate_neighbor_list(const ParticleSystem &system, std::size_t stamp = 0);

}  // namespace ssph::sph
