#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ssph/chaos/basis.hpp"
#include "ssph/chaos/tensors.hpp"
#include "ssph/galerkin/problem.hpp"
#include "ssph/sph/derivative.hpp"
#include "ssph/sph/neighbors.hpp"

namespace ssph::galerkin {

enum class StepperMode { Eulerian, Lagrangian };

struct SolverConfig {
  int order = 3;
  StepperMode mode = StepperMode::Eulerian;
  bool corrected = true;
  double cfl_guard = 0.25;  // 0 disables the check
  std::size_t output_stride = 10;
  int pair_nodes = 0;  // quadrature nodes for G2; 0 = default
};

/// Chaos coefficients at one time level. Values are stored row by row:
/// u[l * n + j] with n the total particle count (real then ghost).
struct State {
  double t = 0.0;
  std::size_t step = 0;
  std::vector<double> u;
  std::vector<double> v;               // second velocity component (2D only)
  std::vector<Vec2> positions;         // real particles
};

/// y <- y + dt/2 (f(y) + f(y + dt f(y))), calling `fix` on every stage value.
void heun_step(std::vector<double> &y, double dt,
               const std::function<void(const std::vector<double> &, std::vector<double> &)> &f,
               const std::function<void(std::vector<double> &)> &fix = {});

/// Sets wall rows of the real particles to `wall` (one value per chaos row,
/// empty = zero) and refreshes ghost rows by odd reflection about the wall
/// value across every wall the ghost was mirrored through.
void apply_dirichlet_bc(const sph::ParticleSystem &system, std::size_t rows,
                        std::span<const double> wall, std::span<double> values);

/// Stochastic Galerkin SPH solver for one problem at a fixed chaos order.
class GalerkinSolver {
 public:
  using Observer = std::function<void(const State &)>;

  GalerkinSolver(StochasticProblem problem, SolverConfig config);

  const StochasticProblem &problem() const { return problem_; }
  const SolverConfig &config() const { return config_; }
  const chaos::ChaosBasis &basis() const { return *basis_; }
  const GermLayout &layout() const { return layout_; }
  const sph::ParticleSystem &system() const { return system_; }
  const sph::DerivativeOperator &derivative() const { return derivative_; }
  std::size_t rows() const { return basis_->size(); }
  std::size_t particles() const { return system_.size(); }
  int components() const { return problem_.components(); }

  /// Advection coupling G2_c (identity times c for a constant speed).
  const chaos::PairTensor &speed_tensor() const { return g2_speed_; }
  const chaos::TripleTensor &triple_tensor() const { return g3_; }
  std::span<const double> wall_u() const { return wall_u_; }

  /// Projected initial condition with boundary rows enforced.
  State initial_state() const;

  /// Time derivative of both components at the solver's current particle
  /// configuration. Ghost rows of the result are zero.
  void rhs(const State &state, std::vector<double> &du, std::vector<double> &dv) const;

  /// Forcing projections F_j^l (real particles, row-major); zero if unset.
  void set_forcing(std::vector<double> fu, std::vector<double> fv = {});

  /// Courant number dt * speed / dx used by the guard.
  double courant(const State &state) const;

  /// One predictor-corrector step. Throws CflViolation before stepping when
  /// the guard fails and NumericalError if the result is not finite.
  void step(State &state);

  /// Integrates to t_end; `observer` sees step 0, every output_stride-th
  /// step and the final step.
  State run(const Observer &observer = {});

 private:
  void build_operators();
  void sync_positions(std::span<const Vec2> positions);
  void enforce(std::vector<double> &u, std::vector<double> &v) const;
  void check_cfl(const State &state) const;

  StochasticProblem problem_;
  SolverConfig config_;
  GermLayout layout_;
  std::shared_ptr<const chaos::ChaosBasis> basis_;
  sph::ParticleSystem system_;
  sph::SmoothingKernel kernel_;
  sph::NeighborLists neighbors_;
  sph::DerivativeOperator derivative_;
  std::size_t rebuilds_ = 0;

  chaos::PairTensor g2_speed_;
  std::vector<std::vector<chaos::PairTensor::Entry>> speed_cols_;
  chaos::TripleTensor g3_;
  std::vector<std::vector<std::vector<chaos::PairTensor::Entry>>> visc_cols_;  // per KL mode
  std::vector<double> visc_mean_;                       // per particle (0 on ghosts)
  std::vector<std::vector<double>> visc_modes_;         // sqrt(lambda) psi per particle

  std::vector<double> wall_u_;
  std::vector<double> wall_v_;
  std::vector<double> forcing_u_;
  std::vector<double> forcing_v_;
};

/// Basis used for a problem: total-degree set of the germ dimension, or the
/// single constant function when the problem is deterministic.
std::shared_ptr<const chaos::ChaosBasis> make_basis(const StochasticProblem &problem, int order);

/// Projected initial coefficients on the real particles, row-major
/// (rows x real particles), for one component.
std::vector<double> project_initial_condition(const StochasticProblem &problem,
                                              const chaos::ChaosBasis &basis,
                                              const sph::ParticleSystem &system, int component);

/// Chaos coefficients of a Dirichlet wall value.
std::vector<double> project_wall_value(const DirichletValue &value, const chaos::ChaosBasis &basis);

}  // namespace ssph::galerkin
