#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ssph/chaos/basis.hpp"
#include "ssph/common/vec2.hpp"
#include "ssph/fields/karhunen_loeve.hpp"
#include "ssph/sph/kernel.hpp"
#include "ssph/sph/particles.hpp"

namespace ssph::galerkin {

enum class Distribution { Constant, Gaussian, Lognormal };

/// Scalar random input driven by one standard-normal germ coordinate.
/// Lognormal uses the law with the given mean and standard deviation.
struct RandomScalar {
  Distribution law = Distribution::Constant;
  double mean = 0.0;
  double stddev = 0.0;

  /// Germ coordinates consumed (0 for Constant, else 1).
  int germ_dims() const { return law == Distribution::Constant ? 0 : 1; }
  double realize(double xi) const;
  /// |mean| + 3 stddev; used by the CFL guard.
  double bound() const;
};

/// Spatially varying viscosity: nodal mean plus an optional KL expansion on
/// the real particles (each KL mode is one germ coordinate).
struct ViscosityModel {
  double mean = 0.05;
  std::vector<double> nodal;  // overrides `mean` per real particle when non-empty
  std::shared_ptr<const fields::KLExpansion> kl;

  int germ_dims() const { return kl ? static_cast<int>(kl->size()) : 0; }
  double at(std::size_t j) const { return nodal.empty() ? mean : nodal[j]; }
};

struct InitialCondition {
  enum class Kind { Deterministic, RandomSine, KL, Field };
  Kind kind = Kind::Deterministic;

  /// Deterministic: u0 = fn(x), v0 = fn_v(x) (fn_v defaults to fn).
  std::function<double(const Vec2 &)> fn;
  std::function<double(const Vec2 &)> fn_v;

  /// RandomSine (1D): u0 = alpha sin(beta x).
  RandomScalar alpha;
  RandomScalar beta;

  /// KL: u0 = mean + sum sqrt(lambda_k) psi_k xi_k on the real particles;
  /// in two dimensions v0 = u0.
  std::shared_ptr<const fields::KLExpansion> kl;

  /// Field: nodal values on the real particles.
  std::vector<double> values_u;
  std::vector<double> values_v;

  int germ_dims() const;
};

enum class OperatorKind { Advection1D, Burgers1D, Burgers2D };

/// Advective term of the two-dimensional equations. Verbatim contracts both
/// velocity components with the x-derivative in the u equation and with the
/// y-derivative in the v equation; Standard uses u d/dx + v d/dy.
enum class AdvectionForm { Verbatim, Standard };

/// Dirichlet wall value g(xi) depending on the listed global germ
/// coordinates; empty function means homogeneous.
struct DirichletValue {
  chaos::GermFunction g;
  std::vector<int> dims;
};

struct StochasticProblem {
  OperatorKind op = OperatorKind::Advection1D;
  sph::LatticeSpec lattice;
  sph::KernelFamily kernel = sph::KernelFamily::CubicSpline;

  RandomScalar speed;               // Advection1D: u_t = c u_x
  std::optional<double> guard_speed;  // overrides speed.bound() in the CFL check

  ViscosityModel viscosity;          // Burgers2D
  AdvectionForm form = AdvectionForm::Verbatim;
  bool advection_enabled = true;

  InitialCondition ic;
  DirichletValue wall_u;
  DirichletValue wall_v;

  double dt = 1e-3;
  double t_end = 0.1;

  int components() const { return op == OperatorKind::Burgers2D ? 2 : 1; }
  std::size_t step_count() const;
};

/// Germ coordinates in order: speed, initial condition, viscosity.
struct GermLayout {
  int speed_offset = 0;
  int speed_dims = 0;
  int ic_offset = 0;
  int ic_dims = 0;
  int viscosity_offset = 0;
  int viscosity_dims = 0;

  int total() const { return speed_dims + ic_dims + viscosity_dims; }
};

GermLayout germ_layout(const StochasticProblem &problem);

/// Throws ConfigError with a field-level message.
void validate_problem(const StochasticProblem &problem);

}  // namespace ssph::galerkin
