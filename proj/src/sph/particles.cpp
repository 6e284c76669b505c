#include "ssph/sph/particles.hpp"

#include <cmath>
#include <sstream>

#include "ssph/common/error.hpp"

namespace ssph::sph {

namespace {

double wrap(double x, double lower, double period) {
  double y = std::fmod(x - lower, period);
  if (y < 0.0) y += period;
  if (y >= period) y -= period;
  return lower + y;
}

double min_image(double d, double period) { return d - period * std::nearbyint(d / period); }

}  // namespace

ParticleSystem::ParticleSystem(int dim, std::vector<Vec2> positions, std::vector<double> masses,
                               std::vector<double> densities, Topology topology, Box box,
                               double search_radius)
    : dim_(dim),
      positions_(std::move(positions)),
      masses_(std::move(masses)),
      densities_(std::move(densities)),
      topology_(topology),
      box_(box),
      search_radius_(search_radius),
      real_count_(positions_.size()) {
  validate();
  volumes_.resize(masses_.size());
  for (std::size_t j = 0; j < masses_.size(); ++j) volumes_[j] = masses_[j] / densities_[j];
  if (topology_ == Topology::Periodic) {
    for (auto &p : positions_) {
      p.x = wrap(p.x, box_.lower.x, box_.extent().x);
      if (dim_ == 2) p.y = wrap(p.y, box_.lower.y, box_.extent().y);
    }
  }
}

void ParticleSystem::validate() const {
  if (dim_ != 1 && dim_ != 2) throw ConfigError("particle dimension must be 1 or 2");
  if (positions_.empty()) throw ConfigError("particle system is empty");
  if (masses_.size() != positions_.size() || densities_.size() != positions_.size())
    throw ContractViolation("positions, masses and densities must have equal length");
  for (std::size_t j = 0; j < masses_.size(); ++j) {
    if (!(masses_[j] > 0.0) || !(densities_[j] > 0.0)) {
      std::ostringstream msg;
      msg << "particle " << j << " has non-positive mass or density";
      throw ConfigError(msg.str());
    }
  }
  if (!(search_radius_ > 0.0)) throw ConfigError("search radius must be positive");
  const Vec2 ext = box_.extent();
  if (!(ext.x > 0.0) || (dim_ == 2 && !(ext.y > 0.0))) throw ConfigError("domain box is empty");
  if (topology_ == Topology::Periodic) {
    const bool bad_x = search_radius_ >= 0.5 * ext.x;
    const bool bad_y = dim_ == 2 && search_radius_ >= 0.5 * ext.y;
    if (bad_x || bad_y)
      throw ConfigError(
          "search radius must be below half the period (minimum-image convention is ambiguous)");
  }
}

bool ParticleSystem::periodic_axis(int axis) const {
  return topology_ == Topology::Periodic && axis < dim_;
}

Vec2 ParticleSystem::displacement(std::size_t j, std::size_t k) const {
  Vec2 d = positions_[j] - positions_[k];
  if (topology_ == Topology::Periodic) {
    d.x = min_image(d.x, box_.extent().x);
    if (dim_ == 2) d.y = min_image(d.y, box_.extent().y);
  }
  return d;
}

bool ParticleSystem::on_dirichlet_wall(std::size_t j) const {
  if (topology_ != Topology::DirichletGhost || j >= real_count_) return false;
  constexpr double tol = 1e-12;
  const Vec2 &p = positions_[j];
  if (std::abs(p.x - box_.lower.x) < tol || std::abs(p.x - box_.upper.x) < tol) return true;
  if (dim_ == 2 && (std::abs(p.y - box_.lower.y) < tol || std::abs(p.y - box_.upper.y) < tol))
    return true;
  return false;
}

Vec2 ParticleSystem::mirror(const Vec2 &p, int wall_x, int wall_y) const {
  Vec2 q = p;
  if (wall_x < 0) q.x = 2.0 * box_.lower.x - q.x;
  if (wall_x > 0) q.x = 2.0 * box_.upper.x - q.x;
  if (wall_y < 0) q.y = 2.0 * box_.lower.y - q.y;
  if (wall_y > 0) q.y = 2.0 * box_.upper.y - q.y;
  return q;
}

void ParticleSystem::refresh_ghost_positions() {
  for (std::size_t g = 0; g < ghosts_.size(); ++g) {
    const GhostLink &link = ghosts_[g];
    positions_[real_count_ + g] = mirror(positions_[link.source], link.wall_x, link.wall_y);
  }
}

void ParticleSystem::set_real_positions(std::span<const Vec2> positions) {
  if (positions.size() != real_count_)
    throw ContractViolation("set_real_positions: size does not match real particle count");
  for (std::size_t j = 0; j < real_count_; ++j) {
    Vec2 p = positions[j];
    if (periodic_axis(0)) p.x = wrap(p.x, box_.lower.x, box_.extent().x);
    if (periodic_axis(1)) p.y = wrap(p.y, box_.lower.y, box_.extent().y);
    positions_[j] = p;
  }
  refresh_ghost_positions();
}

void ParticleSystem::add_ghost_band(double width) {
  if (topology_ != Topology::DirichletGhost)
    throw ConfigError("ghost bands require the DirichletGhost topology");
  if (!ghosts_.empty()) throw ContractViolation("ghost band already present");
  constexpr double tol = 1e-12;
  auto wall_options = [&](double coord, double lo, double hi) {
    std::vector<int> walls{0};
    const double dlo = coord - lo;
    const double dhi = hi - coord;
    if (dlo > tol && dlo <= width + tol) walls.push_back(-1);
    if (dhi > tol && dhi <= width + tol) walls.push_back(+1);
    return walls;
  };
  for (std::size_t j = 0; j < real_count_; ++j) {
    const Vec2 p = positions_[j];
    const auto wx = wall_options(p.x, box_.lower.x, box_.upper.x);
    const auto wy = dim_ == 2 ? wall_options(p.y, box_.lower.y, box_.upper.y) : std::vector<int>{0};
    for (int a : wx) {
      for (int b : wy) {
        if (a == 0 && b == 0) continue;
        ghosts_.push_back({static_cast<std::uint32_t>(j), static_cast<std::int8_t>(a),
                           static_cast<std::int8_t>(b)});
        positions_.push_back(mirror(p, a, b));
        masses_.push_back(masses_[j]);
        densities_.push_back(densities_[j]);
        volumes_.push_back(volumes_[j]);
      }
    }
  }
}

ParticleSystem make_lattice(const LatticeSpec &spec) {
  if (spec.cells < 1) throw ConfigError("lattice needs at least one cell");
  if (spec.dim != 1 && spec.dim != 2) throw ConfigError("lattice dimension must be 1 or 2");
  const double dx = lattice_spacing(spec);
  const int per_axis = spec.topology == Topology::DirichletGhost ? spec.cells + 1 : spec.cells;
  const int count_y = spec.dim == 2 ? per_axis : 1;
  const double volume = spec.dim == 1 ? dx : dx * dx;

  std::vector<Vec2> positions;
  positions.reserve(static_cast<std::size_t>(per_axis) * count_y);
  for (int iy = 0; iy < count_y; ++iy)
    for (int ix = 0; ix < per_axis; ++ix)
      positions.push_back({ix * dx, spec.dim == 2 ? iy * dx : 0.0});

  const std::size_t n = positions.size();
  ParticleSystem::Box box;
  ParticleSystem system(spec.dim, std::move(positions), std::vector<double>(n, volume),
                        std::vector<double>(n, 1.0), spec.topology, box,
                        lattice_search_radius(spec));
  if (spec.topology == Topology::DirichletGhost) system.add_ghost_band(lattice_search_radius(spec));
  return system;
}

}  // namespace ssph::sph
