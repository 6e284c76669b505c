#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ssph/common/vec2.hpp"

namespace ssph::sph {

enum class Topology { Open, Periodic, DirichletGhost };

/// Mirror relation for a ghost particle: the real particle it copies and
/// which walls it was reflected across (-1 low wall, +1 high wall, 0 none).
struct GhostLink {
  std::uint32_t source = 0;
  std::int8_t wall_x = 0;
  std::int8_t wall_y = 0;
};

/// Particle cloud with per-particle mass and density. Real particles come
/// first; ghost particles (DirichletGhost topology only) follow and are never
/// integrated, only refreshed from their sources.
class ParticleSystem {
 public:
  /// Box [lower, upper] per axis. Under Periodic topology the period equals
  /// the box extent and positions are wrapped into [lower, upper).
  struct Box {
    Vec2 lower{0.0, 0.0};
    Vec2 upper{1.0, 1.0};
    Vec2 extent() const { return upper - lower; }
  };

  ParticleSystem(int dim, std::vector<Vec2> positions, std::vector<double> masses,
                 std::vector<double> densities, Topology topology, Box box, double search_radius);

  int dim() const { return dim_; }
  Topology topology() const { return topology_; }
  const Box &box() const { return box_; }
  double search_radius() const { return search_radius_; }

  std::size_t size() const { return positions_.size(); }
  std::size_t real_count() const { return real_count_; }
  std::size_t ghost_count() const { return ghosts_.size(); }

  std::span<const Vec2> positions() const { return positions_; }
  const Vec2 &position(std::size_t j) const { return positions_[j]; }
  double mass(std::size_t j) const { return masses_[j]; }
  double density(std::size_t j) const { return densities_[j]; }
  double volume(std::size_t j) const { return volumes_[j]; }
  std::span<const double> volumes() const { return volumes_; }
  std::span<const GhostLink> ghosts() const { return ghosts_; }

  /// x_j - x_k, using the minimum-image convention on periodic axes.
  Vec2 displacement(std::size_t j, std::size_t k) const;

  /// True for real particles lying on a Dirichlet wall.
  bool on_dirichlet_wall(std::size_t j) const;

  /// Replace the real-particle positions (wrapping periodic axes) and
  /// refresh ghost mirrors.
  void set_real_positions(std::span<const Vec2> positions);

  /// Append one band of mirrored ghosts of the given width beyond every wall
  /// (corners receive doubly reflected copies). Requires DirichletGhost.
  void add_ghost_band(double width);

 private:
  bool periodic_axis(int axis) const;
  Vec2 mirror(const Vec2 &p, int wall_x, int wall_y) const;
  void refresh_ghost_positions();
  void validate() const;

  int dim_;
  std::vector<Vec2> positions_;
  std::vector<double> masses_;
  std::vector<double> densities_;
  std::vector<double> volumes_;
  Topology topology_;
  Box box_;
  double search_radius_;
  std::size_t real_count_;
  std::vector<GhostLink> ghosts_;
};

/// Uniform lattice on the unit box with J cells per axis, unit density and
/// m_j = dx^d. Open/Periodic place J points per axis at j*dx; DirichletGhost
/// places J+1 points per axis (both walls included) and adds a ghost band of
/// width search_radius.
struct LatticeSpec {
  int dim = 1;
  int cells = 64;
  Topology topology = Topology::Periodic;
  double h_factor = 1.2;
  double radius_factor = 2.0;
};

ParticleSystem make_lattice(const LatticeSpec &spec);

inline double lattice_spacing(const LatticeSpec &spec) { return 1.0 / spec.cells; }
inline double lattice_smoothing_length(const LatticeSpec &spec) {
  return spec.h_factor * lattice_spacing(spec);
}
inline double lattice_search_radius(const LatticeSpec &spec) {
  return spec.radius_factor * lattice_smoothing_length(spec);
}

}  // namespace ssph::sph
