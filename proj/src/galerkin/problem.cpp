#include "ssph/galerkin/problem.hpp"

#include <cmath>
#include <sstream>

#include "ssph/common/error.hpp"

namespace ssph::galerkin {

double RandomScalar::realize(double xi) const {
  switch (law) {
    case Distribution::Constant:
      return mean;
    case Distribution::Gaussian:
      return mean + stddev * xi;
    case Distribution::Lognormal: {
      const double s2 = std::log1p((stddev * stddev) / (mean * mean));
      return std::exp(std::log(mean) - 0.5 * s2 + std::sqrt(s2) * xi);
    }
  }
  return mean;
}

double RandomScalar::bound() const {
  return std::abs(mean) + (law == Distribution::Constant ? 0.0 : 3.0 * stddev);
}

int InitialCondition::germ_dims() const {
  switch (kind) {
    case Kind::RandomSine:
      return alpha.germ_dims() + beta.germ_dims();
    case Kind::KL:
      return kl ? static_cast<int>(kl->size()) : 0;
    default:
      return 0;
  }
}

std::size_t StochasticProblem::step_count() const {
  const double n = std::round(t_end / dt);
  return static_cast<std::size_t>(n);
}

GermLayout germ_layout(const StochasticProblem &problem) {
  GermLayout g;
  g.speed_dims = problem.op == OperatorKind::Advection1D ? problem.speed.germ_dims() : 0;
  g.ic_offset = g.speed_dims;
  g.ic_dims = problem.ic.germ_dims();
  g.viscosity_offset = g.ic_offset + g.ic_dims;
  g.viscosity_dims = problem.op == OperatorKind::Burgers2D ? problem.viscosity.germ_dims() : 0;
  return g;
}

namespace {

void require(bool ok, const std::string &field, const std::string &what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

void check_scalar(const RandomScalar &s, const std::string &field) {
  require(std::isfinite(s.mean), field + ".mean", "must be finite");
  require(std::isfinite(s.stddev) && s.stddev >= 0.0, field + ".std", "must be >= 0");
  if (s.law == Distribution::Lognormal) require(s.mean > 0.0, field + ".mean", "lognormal mean must be > 0");
}

}  // namespace

void validate_problem(const StochasticProblem &p) {
  require(p.dt > 0.0 && std::isfinite(p.dt), "time.dt", "must be positive");
  require(p.t_end > 0.0 && std::isfinite(p.t_end), "time.t_end", "must be positive");
  const double n = std::round(p.t_end / p.dt);
  require(std::abs(n * p.dt - p.t_end) <= 1e-9 * p.t_end, "time.t_end",
          "must be an integer multiple of dt");
  require(p.lattice.cells >= 4, "grid.cells", "must be >= 4");
  require(p.lattice.h_factor > 0.0, "grid.h_factor", "must be positive");
  require(p.lattice.radius_factor > 0.0, "grid.radius_factor", "must be positive");
  const int want_dim = p.op == OperatorKind::Burgers2D ? 2 : 1;
  require(p.lattice.dim == want_dim, "grid.dim", "does not match the operator");
  check_scalar(p.speed, "speed");

  const std::size_t n_real = p.lattice.topology == sph::Topology::DirichletGhost
                                 ? static_cast<std::size_t>(std::pow(p.lattice.cells + 1, want_dim))
                                 : static_cast<std::size_t>(std::pow(p.lattice.cells, want_dim));
  switch (p.ic.kind) {
    case InitialCondition::Kind::Deterministic:
      require(static_cast<bool>(p.ic.fn), "ic.function", "missing");
      break;
    case InitialCondition::Kind::RandomSine:
      require(want_dim == 1, "ic.kind", "random sine is one-dimensional");
      check_scalar(p.ic.alpha, "ic.alpha");
      check_scalar(p.ic.beta, "ic.beta");
      break;
    case InitialCondition::Kind::KL:
      require(p.ic.kl != nullptr, "ic.kl", "missing expansion");
      require(p.ic.kl->nodes() == n_real, "ic.kl", "node count differs from the lattice");
      break;
    case InitialCondition::Kind::Field:
      require(p.ic.values_u.size() == n_real, "ic.values", "length differs from the lattice");
      if (want_dim == 2)
        require(p.ic.values_v.size() == n_real, "ic.values_v", "length differs from the lattice");
      break;
  }
  if (p.op == OperatorKind::Burgers2D) {
    require(p.viscosity.mean >= 0.0, "viscosity.mean", "must be >= 0");
    if (!p.viscosity.nodal.empty())
      require(p.viscosity.nodal.size() == n_real, "viscosity.nodal", "length differs from the lattice");
    if (p.viscosity.kl)
      require(p.viscosity.kl->nodes() == n_real, "viscosity.kl", "node count differs from the lattice");
  }
}

}  // namespace ssph::galerkin
