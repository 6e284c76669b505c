#include "ssph/sph/neighbors.hpp"

#include <algorithm>
#include <cmath>

#include "ssph/common/error.hpp"

namespace ssph::sph {

NeighborLists::NeighborLists(std::vector<std::size_t> offsets, std::vector<std::uint32_t> indices,
                             std::size_t stamp)
    : offsets_(std::move(offsets)), indices_(std::move(indices)), stamp_(stamp) {}

namespace {

struct CellGrid {
  Vec2 origin;
  Vec2 cell{1.0, 1.0};
  int nx = 1;
  int ny = 1;
  bool wrap = false;

  int cell_x(double x) const { return std::clamp(static_cast<int>((x - origin.x) / cell.x), 0, nx - 1); }
  int cell_y(double y) const { return std::clamp(static_cast<int>((y - origin.y) / cell.y), 0, ny - 1); }
};

}  // namespace

NeighborLists generate_neighbor_list(const ParticleSystem &system, std::size_t stamp) {
  const double radius = system.search_radius();
  const double radius2 = radius * radius;
  const std::size_t n = system.size();
  const auto pos = system.positions();
  const int dim = system.dim();
  const bool periodic = system.topology() == Topology::Periodic;

  CellGrid grid;
  if (periodic) {
    const Vec2 ext = system.box().extent();
    grid.origin = system.box().lower;
    grid.nx = std::max(1, static_cast<int>(std::floor(ext.x / radius)));
    grid.ny = dim == 2 ? std::max(1, static_cast<int>(std::floor(ext.y / radius))) : 1;
    grid.wrap = true;
    // With fewer than three cells on a periodic axis the stencil would visit
    // a cell twice; a single cell scanned once is still exact.
    if (grid.nx < 3) grid.nx = 1;
    if (dim == 2 && grid.ny < 3) grid.ny = 1;
    grid.cell = {ext.x / grid.nx, dim == 2 ? ext.y / grid.ny : 1.0};
  } else {
    Vec2 lo = pos[0];
    Vec2 hi = pos[0];
    for (const auto &p : pos) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
    grid.origin = lo;
    grid.cell = {radius, radius};
    grid.nx = static_cast<int>(std::floor((hi.x - lo.x) / radius)) + 1;
    grid.ny = dim == 2 ? static_cast<int>(std::floor((hi.y - lo.y) / radius)) + 1 : 1;
  }

  // Bucket particles by cell (counting sort keeps indices ascending per cell).
  const std::size_t ncell = static_cast<std::size_t>(grid.nx) * grid.ny;
  std::vector<std::size_t> cell_start(ncell + 1, 0);
  std::vector<std::uint32_t> cell_of(n);
  for (std::size_t j = 0; j < n; ++j) {
    const int cx = grid.cell_x(pos[j].x);
    const int cy = dim == 2 ? grid.cell_y(pos[j].y) : 0;
    cell_of[j] = static_cast<std::uint32_t>(cy * grid.nx + cx);
    ++cell_start[cell_of[j] + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) cell_start[c + 1] += cell_start[c];
  std::vector<std::uint32_t> cell_members(n);
  {
    std::vector<std::size_t> fill(cell_start.begin(), cell_start.end() - 1);
    for (std::size_t j = 0; j < n; ++j) cell_members[fill[cell_of[j]]++] = static_cast<std::uint32_t>(j);
  }

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> indices;
  indices.reserve(n * (dim == 1 ? 8 : 40));
  std::vector<std::uint32_t> scratch;
  for (std::size_t j = 0; j < n; ++j) {
    scratch.clear();
    const int cx = static_cast<int>(cell_of[j] % grid.nx);
    const int cy = static_cast<int>(cell_of[j] / grid.nx);
    const int ylo = grid.ny > 1 ? -1 : 0;
    const int yhi = grid.ny > 1 ? 1 : 0;
    const int xlo = grid.nx > 1 ? -1 : 0;
    const int xhi = grid.nx > 1 ? 1 : 0;
    for (int oy = ylo; oy <= yhi; ++oy) {
      int ccy = cy + oy;
      if (grid.wrap) ccy = (ccy + grid.ny) % grid.ny;
      if (ccy < 0 || ccy >= grid.ny) continue;
      for (int ox = xlo; ox <= xhi; ++ox) {
        int ccx = cx + ox;
        if (grid.wrap) ccx = (ccx + grid.nx) % grid.nx;
        if (ccx < 0 || ccx >= grid.nx) continue;
        const std::size_t c = static_cast<std::size_t>(ccy) * grid.nx + ccx;
        for (std::size_t s = cell_start[c]; s < cell_start[c + 1]; ++s) {
          const std::uint32_t k = cell_members[s];
          const Vec2 d = system.displacement(j, k);
          if (dot(d, d) <= radius2) scratch.push_back(k);
        }
      }
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    indices.insert(indices.end(), scratch.begin(), scratch.end());
    offsets[j + 1] = indices.size();
  }
  return NeighborLists(std::move(offsets), std::move(indices), stamp);
}

}  // namespace ssph::sph
