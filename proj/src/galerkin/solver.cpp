#include "ssph/galerkin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssph/common/error.hpp"
#include "ssph/common/parallel.hpp"

namespace ssph::galerkin {

using sph::Topology;

void heun_step(std::vector<double> &y, double dt,
               const std::function<void(const std::vector<double> &, std::vector<double> &)> &f,
               const std::function<void(std::vector<double> &)> &fix) {
  std::vector<double> r0, r1;
  f(y, r0);
  std::vector<double> pred(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) pred[i] = y[i] + dt * r0[i];
  if (fix) fix(pred);
  f(pred, r1);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.5 * dt * (r0[i] + r1[i]);
  if (fix) fix(y);
}

void apply_dirichlet_bc(const sph::ParticleSystem &system, std::size_t rows,
                        std::span<const double> wall, std::span<double> values) {
  const std::size_t n = system.size();
  const std::size_t nr = system.real_count();
  if (values.size() != rows * n) throw ContractViolation("field size does not match the particles");
  if (!wall.empty() && wall.size() != rows) throw ContractViolation("wall value has wrong row count");
  auto g = [&](std::size_t l) { return wall.empty() ? 0.0 : wall[l]; };
  for (std::size_t j = 0; j < nr; ++j)
    if (system.on_dirichlet_wall(j))
      for (std::size_t l = 0; l < rows; ++l) values[l * n + j] = g(l);
  const auto ghosts = system.ghosts();
  for (std::size_t k = 0; k < ghosts.size(); ++k) {
    const auto &link = ghosts[k];
    const int reflections = (link.wall_x != 0) + (link.wall_y != 0);
    for (std::size_t l = 0; l < rows; ++l) {
      double v = values[l * n + link.source];
      for (int r = 0; r < reflections; ++r) v = 2.0 * g(l) - v;
      values[l * n + nr + k] = v;
    }
  }
}

std::shared_ptr<const chaos::ChaosBasis> make_basis(const StochasticProblem &problem, int order) {
  if (order < 0) throw ConfigError("chaos.order: must be >= 0");
  const int p = germ_layout(problem).total();
  if (p == 0) return std::make_shared<chaos::ChaosBasis>(chaos::MultiIndexSet(1, 0));
  return std::make_shared<chaos::ChaosBasis>(chaos::MultiIndexSet(p, order));
}

std::vector<double> project_initial_condition(const StochasticProblem &problem,
                                              const chaos::ChaosBasis &basis,
                                              const sph::ParticleSystem &system, int component) {
  const GermLayout layout = germ_layout(problem);
  if (layout.total() > basis.dimension())
    throw ConfigError("initial condition germ exceeds the basis dimension");
  const std::size_t nr = system.real_count();
  const std::size_t rows = basis.size();
  std::vector<double> out(rows * nr, 0.0);
  const auto &ic = problem.ic;
  using Kind = InitialCondition::Kind;
  switch (ic.kind) {
    case Kind::Deterministic: {
      const auto &fn = (component == 1 && ic.fn_v) ? ic.fn_v : ic.fn;
      for (std::size_t j = 0; j < nr; ++j) out[j] = fn(system.position(j));
      break;
    }
    case Kind::Field: {
      const auto &src = component == 1 ? ic.values_v : ic.values_u;
      std::copy(src.begin(), src.end(), out.begin());
      break;
    }
    case Kind::KL: {
      const auto &kl = *ic.kl;
      std::copy(kl.mean.begin(), kl.mean.end(), out.begin());
      if (basis.order() >= 1) {
        for (std::size_t k = 0; k < kl.size(); ++k) {
          const std::size_t row = basis.indices().unit_index(layout.ic_offset + static_cast<int>(k));
          const double s = std::sqrt(kl.eigenvalues[k]);
          for (std::size_t j = 0; j < nr; ++j) out[row * nr + j] = s * kl.modes[k][j];
        }
      }
      break;
    }
    case Kind::RandomSine: {
      std::vector<int> dims;
      const int ia = ic.alpha.germ_dims() ? static_cast<int>(dims.size()) : -1;
      if (ia >= 0) dims.push_back(layout.ic_offset);
      const int ib = ic.beta.germ_dims() ? static_cast<int>(dims.size()) : -1;
      if (ib >= 0) dims.push_back(layout.ic_offset + ia + 1);
      std::vector<double> x(nr);
      for (std::size_t j = 0; j < nr; ++j) x[j] = system.position(j).x;
      const auto g = [&](std::span<const double> xi, std::span<double> values) {
        const double a = ic.alpha.realize(ia >= 0 ? xi[ia] : 0.0);
        const double b = ic.beta.realize(ib >= 0 ? xi[ib] : 0.0);
        for (std::size_t j = 0; j < nr; ++j) values[j] = a * std::sin(b * x[j]);
      };
      out = chaos::project_random_field(basis, g, nr, dims);
      break;
    }
  }
  return out;
}

std::vector<double> project_wall_value(const DirichletValue &value, const chaos::ChaosBasis &basis) {
  if (!value.g) return std::vector<double>(basis.size(), 0.0);
  return chaos::project_random_function(basis, value.g, value.dims);
}

GalerkinSolver::GalerkinSolver(StochasticProblem problem, SolverConfig config)
    : problem_((validate_problem(problem), std::move(problem))),
      config_(config),
      layout_(germ_layout(problem_)),
      basis_(make_basis(problem_, config.order)),
      system_(sph::make_lattice(problem_.lattice)),
      kernel_(problem_.kernel, sph::lattice_smoothing_length(problem_.lattice), problem_.lattice.dim) {
  if (config_.output_stride == 0) throw ConfigError("output.stride: must be >= 1");
  if (config_.cfl_guard < 0.0) throw ConfigError("solver.cfl_guard: must be >= 0");
  build_operators();
  const std::size_t card = rows();
  const std::size_t nr = system_.real_count();
  const std::size_t n = system_.size();

  if (problem_.op == OperatorKind::Advection1D) {
    if (layout_.speed_dims > 0) {
      const RandomScalar speed = problem_.speed;
      const int dims[] = {layout_.speed_offset};
      g2_speed_ = chaos::weighted_pair_tensor(
          *basis_, [speed](std::span<const double> xi) { return speed.realize(xi[0]); }, dims,
          config_.pair_nodes);
    } else {
      g2_speed_ = chaos::PairTensor::identity(card, problem_.speed.mean);
    }
    speed_cols_ = g2_speed_.column_entries();
  } else {
    g3_ = chaos::triple_product_tensor(*basis_);
  }

  if (problem_.op == OperatorKind::Burgers2D) {
    visc_mean_.assign(n, 0.0);
    for (std::size_t j = 0; j < nr; ++j) visc_mean_[j] = problem_.viscosity.at(j);
    if (const auto &kl = problem_.viscosity.kl) {
      for (std::size_t k = 0; k < kl->size(); ++k) {
        visc_cols_.push_back(
            chaos::linear_germ_tensor(*basis_, layout_.viscosity_offset + static_cast<int>(k))
                .column_entries());
        std::vector<double> mode(n, 0.0);
        const double s = std::sqrt(kl->eigenvalues[k]);
        for (std::size_t j = 0; j < nr; ++j) mode[j] = s * kl->modes[k][j];
        visc_modes_.push_back(std::move(mode));
      }
    }
  }

  if (problem_.lattice.topology == Topology::DirichletGhost) {
    wall_u_ = project_wall_value(problem_.wall_u, *basis_);
    wall_v_ = project_wall_value(problem_.wall_v, *basis_);
  }
}

void GalerkinSolver::build_operators() {
  neighbors_ = sph::generate_neighbor_list(system_, rebuilds_++);
  derivative_ = sph::DerivativeOperator(system_, neighbors_, kernel_, config_.corrected);
}

void GalerkinSolver::sync_positions(std::span<const Vec2> positions) {
  system_.set_real_positions(positions);
  build_operators();
}

void GalerkinSolver::set_forcing(std::vector<double> fu, std::vector<double> fv) {
  const std::size_t want = rows() * system_.real_count();
  if ((!fu.empty() && fu.size() != want) || (!fv.empty() && fv.size() != want))
    throw ContractViolation("forcing has wrong size");
  forcing_u_ = std::move(fu);
  forcing_v_ = std::move(fv);
}

void GalerkinSolver::enforce(std::vector<double> &u, std::vector<double> &v) const {
  if (problem_.lattice.topology != Topology::DirichletGhost) return;
  apply_dirichlet_bc(system_, rows(), wall_u_, u);
  if (components() == 2) apply_dirichlet_bc(system_, rows(), wall_v_, v);
}

State GalerkinSolver::initial_state() const {
  const std::size_t n = system_.size();
  const std::size_t nr = system_.real_count();
  const std::size_t card = rows();
  State s;
  auto fill = [&](int comp, std::vector<double> &dst) {
    const auto proj = project_initial_condition(problem_, *basis_, system_, comp);
    dst.assign(card * n, 0.0);
    for (std::size_t l = 0; l < card; ++l)
      std::copy_n(proj.begin() + static_cast<std::ptrdiff_t>(l * nr), nr,
                  dst.begin() + static_cast<std::ptrdiff_t>(l * n));
  };
  fill(0, s.u);
  if (components() == 2) fill(1, s.v);
  enforce(s.u, s.v);
  s.positions.assign(system_.positions().begin(), system_.positions().begin() + static_cast<std::ptrdiff_t>(nr));
  return s;
}

namespace {

// Applies `fn(m)` for m in [0, count), in parallel when allowed. Each call
// writes a disjoint slice, so the result does not depend on the schedule.
template <class Fn>
void for_rows(std::size_t count, Fn &&fn) {
  const int threads = thread_count();
  const auto c = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1 && count > 1)
  for (std::ptrdiff_t m = 0; m < c; ++m) fn(static_cast<std::size_t>(m));
}

}  // namespace

void GalerkinSolver::rhs(const State &state, std::vector<double> &du, std::vector<double> &dv) const {
  const std::size_t n = system_.size();
  const std::size_t nr = system_.real_count();
  const std::size_t card = rows();
  if (state.u.size() != card * n || (components() == 2 && state.v.size() != card * n))
    throw ContractViolation("state does not match the solver");
  du.assign(card * n, 0.0);
  if (components() == 2) dv.assign(card * n, 0.0);
  else dv.clear();

  auto row = [n](const std::vector<double> &f, std::size_t l) {
    return std::span<const double>(f.data() + l * n, n);
  };
  auto mrow = [n](std::vector<double> &f, std::size_t l) { return std::span<double>(f.data() + l * n, n); };
  auto derive = [&](const std::vector<double> &f, Axis axis) {
    std::vector<double> d(card * n);
    for_rows(card, [&](std::size_t m) { derivative_.apply(row(f, m), axis, mrow(d, m)); });
    return d;
  };

  switch (problem_.op) {
    case OperatorKind::Advection1D: {
      const auto d = derive(state.u, Axis::X);
      for_rows(card, [&](std::size_t l) {
        double *out = du.data() + l * n;
        for (const auto &e : speed_cols_[l]) {
          const double *dm = d.data() + e.m * n;
          for (std::size_t j = 0; j < nr; ++j) out[j] += e.value * dm[j];
        }
      });
      break;
    }
    case OperatorKind::Burgers1D: {
      const auto d = derive(state.u, Axis::X);
      for_rows(card, [&](std::size_t l) {
        double *out = du.data() + l * n;
        for (const auto &e : g3_.row(l)) {
          const double *ui = state.u.data() + e.i * n;
          const double *dm = d.data() + e.m * n;
          for (std::size_t j = 0; j < nr; ++j) out[j] -= e.value * ui[j] * dm[j];
        }
      });
      break;
    }
    case OperatorKind::Burgers2D: {
      if (problem_.advection_enabled) {
        const auto dxu = derive(state.u, Axis::X);
        const auto dyv = derive(state.v, Axis::Y);
        if (problem_.form == AdvectionForm::Verbatim) {
          std::vector<double> s(card * n);
          for (std::size_t k = 0; k < s.size(); ++k) s[k] = state.u[k] + state.v[k];
          for_rows(card, [&](std::size_t l) {
            double *ou = du.data() + l * n;
            double *ov = dv.data() + l * n;
            for (const auto &e : g3_.row(l)) {
              const double *si = s.data() + e.i * n;
              const double *a = dxu.data() + e.m * n;
              const double *b = dyv.data() + e.m * n;
              for (std::size_t j = 0; j < nr; ++j) {
                ou[j] -= e.value * si[j] * a[j];
                ov[j] -= e.value * si[j] * b[j];
              }
            }
          });
        } else {
          const auto dyu = derive(state.u, Axis::Y);
          const auto dxv = derive(state.v, Axis::X);
          for_rows(card, [&](std::size_t l) {
            double *ou = du.data() + l * n;
            double *ov = dv.data() + l * n;
            for (const auto &e : g3_.row(l)) {
              const double *ui = state.u.data() + e.i * n;
              const double *vi = state.v.data() + e.i * n;
              const std::size_t m = e.m * n;
              for (std::size_t j = 0; j < nr; ++j) {
                ou[j] -= e.value * (ui[j] * dxu[m + j] + vi[j] * dyu[m + j]);
                ov[j] -= e.value * (ui[j] * dxv[m + j] + vi[j] * dyv[m + j]);
              }
            }
          });
        }
      }
      // Viscous term: nested first derivatives on both axes.
      auto laplacian = [&](const std::vector<double> &f) {
        auto dx = derive(f, Axis::X);
        auto dy = derive(f, Axis::Y);
        const auto dxx = derive(dx, Axis::X);
        const auto dyy = derive(dy, Axis::Y);
        for (std::size_t k = 0; k < dx.size(); ++k) dx[k] = dxx[k] + dyy[k];
        return dx;
      };
      const auto lu = laplacian(state.u);
      const auto lv = laplacian(state.v);
      for_rows(card, [&](std::size_t l) {
        double *ou = du.data() + l * n;
        double *ov = dv.data() + l * n;
        const double *a = lu.data() + l * n;
        const double *b = lv.data() + l * n;
        for (std::size_t j = 0; j < nr; ++j) {
          ou[j] += visc_mean_[j] * a[j];
          ov[j] += visc_mean_[j] * b[j];
        }
        for (std::size_t k = 0; k < visc_cols_.size(); ++k) {
          const double *mode = visc_modes_[k].data();
          for (const auto &e : visc_cols_[k][l]) {
            const double *am = lu.data() + e.m * n;
            const double *bm = lv.data() + e.m * n;
            for (std::size_t j = 0; j < nr; ++j) {
              ou[j] += e.value * mode[j] * am[j];
              ov[j] += e.value * mode[j] * bm[j];
            }
          }
        }
      });
      break;
    }
  }

  auto add_forcing = [&](const std::vector<double> &f, std::vector<double> &out) {
    if (f.empty()) return;
    for (std::size_t l = 0; l < card; ++l)
      for (std::size_t j = 0; j < nr; ++j) out[l * n + j] += f[l * nr + j];
  };
  add_forcing(forcing_u_, du);
  if (components() == 2) add_forcing(forcing_v_, dv);
}

double GalerkinSolver::courant(const State &state) const {
  const double dx = sph::lattice_spacing(problem_.lattice);
  const std::size_t n = system_.size();
  const std::size_t nr = system_.real_count();
  auto bound = [&](const std::vector<double> &f) {
    double mean = 0.0, spread = 0.0;
    for (std::size_t j = 0; j < nr; ++j) {
      mean = std::max(mean, std::abs(f[j]));
      double s2 = 0.0;
      for (std::size_t l = 1; l < rows(); ++l) s2 += f[l * n + j] * f[l * n + j];
      spread = std::max(spread, std::sqrt(s2));
    }
    return mean + 3.0 * spread;
  };
  double speed = 0.0;
  switch (problem_.op) {
    case OperatorKind::Advection1D:
      speed = problem_.guard_speed.value_or(problem_.speed.bound());
      break;
    case OperatorKind::Burgers1D:
      speed = bound(state.u);
      break;
    case OperatorKind::Burgers2D:
      speed = problem_.advection_enabled ? bound(state.u) + bound(state.v) : 0.0;
      break;
  }
  return problem_.dt * speed / dx;
}

void GalerkinSolver::check_cfl(const State &state) const {
  if (config_.cfl_guard <= 0.0) return;
  const double c = courant(state);
  if (c > config_.cfl_guard) {
    std::ostringstream msg;
    msg << "CFL guard violated at step " << state.step << ": Courant number " << c << " exceeds "
        << config_.cfl_guard << " (dt=" << problem_.dt
        << ", dx=" << sph::lattice_spacing(problem_.lattice) << ")";
    throw CflViolation(msg.str());
  }
}

void GalerkinSolver::step(State &state) {
  check_cfl(state);
  const bool lagrangian = config_.mode == StepperMode::Lagrangian;
  const std::size_t n = system_.size();
  const std::size_t nr = system_.real_count();
  const double dt = problem_.dt;
  const bool two = components() == 2;

  if (lagrangian &&
      !std::equal(state.positions.begin(), state.positions.end(), system_.positions().begin(),
                  [](const Vec2 &a, const Vec2 &b) { return a.x == b.x && a.y == b.y; }))
    sync_positions(state.positions);

  std::vector<double> r0u, r0v, r1u, r1v;
  rhs(state, r0u, r0v);

  State pred;
  pred.u.resize(state.u.size());
  for (std::size_t k = 0; k < state.u.size(); ++k) pred.u[k] = state.u[k] + dt * r0u[k];
  if (two) {
    pred.v.resize(state.v.size());
    for (std::size_t k = 0; k < state.v.size(); ++k) pred.v[k] = state.v[k] + dt * r0v[k];
  }
  enforce(pred.u, pred.v);

  std::vector<Vec2> base;
  if (lagrangian) {
    base = state.positions;
    std::vector<Vec2> moved(base);
    for (std::size_t j = 0; j < nr; ++j) {
      moved[j].x += dt * state.u[j];
      if (two) moved[j].y += dt * state.v[j];
    }
    sync_positions(moved);
  }

  rhs(pred, r1u, r1v);

  const std::vector<double> u0_old(state.u.begin(), state.u.begin() + static_cast<std::ptrdiff_t>(nr));
  const std::vector<double> v0_old =
      two ? std::vector<double>(state.v.begin(), state.v.begin() + static_cast<std::ptrdiff_t>(nr))
          : std::vector<double>{};
  for (std::size_t k = 0; k < state.u.size(); ++k) state.u[k] += 0.5 * dt * (r0u[k] + r1u[k]);
  if (two)
    for (std::size_t k = 0; k < state.v.size(); ++k) state.v[k] += 0.5 * dt * (r0v[k] + r1v[k]);
  enforce(state.u, state.v);

  if (lagrangian) {
    std::vector<Vec2> moved(base);
    for (std::size_t j = 0; j < nr; ++j) {
      moved[j].x += 0.5 * dt * (u0_old[j] + state.u[j]);
      if (two) moved[j].y += 0.5 * dt * (v0_old[j] + state.v[j]);
    }
    sync_positions(moved);
    state.positions.assign(system_.positions().begin(),
                           system_.positions().begin() + static_cast<std::ptrdiff_t>(nr));
  }

  ++state.step;
  state.t = static_cast<double>(state.step) * dt;

  auto finite = [](const std::vector<double> &f) {
    return std::all_of(f.begin(), f.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(state.u) || (two && !finite(state.v))) {
    std::ostringstream msg;
    msg << "solution became non-finite at step " << state.step << " (t=" << state.t << ")";
    throw NumericalError(msg.str());
  }
  (void)n;
}

State GalerkinSolver::run(const Observer &observer) {
  if (config_.mode == StepperMode::Lagrangian) {
    const auto lattice = sph::make_lattice(problem_.lattice);
    sync_positions(lattice.positions().first(lattice.real_count()));
  }
  State state = initial_state();
  const std::size_t steps = problem_.step_count();
  if (observer) observer(state);
  while (state.step < steps) {
    step(state);
    if (observer && (state.step % config_.output_stride == 0 || state.step == steps)) observer(state);
  }
  return state;
}

}  // namespace ssph::galerkin
