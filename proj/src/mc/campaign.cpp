#include "ssph/mc/campaign.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "ssph/common/error.hpp"
#include "ssph/common/parallel.hpp"
#include "ssph/common/rng.hpp"
#include "ssph/fields/karhunen_loeve.hpp"

namespace ssph::mc {

using galerkin::InitialCondition;
using galerkin::StochasticProblem;

std::vector<double> draw_germ(std::uint64_t seed, std::uint64_t index, int dims) {
  CounterStream stream(seed, index);
  std::vector<double> xi(static_cast<std::size_t>(dims));
  for (double &x : xi) x = stream.normal();
  return xi;
}

StochasticProblem realize(const StochasticProblem &problem, std::span<const double> xi,
                          std::size_t *clamped) {
  const auto layout = galerkin::germ_layout(problem);
  if (xi.size() != static_cast<std::size_t>(layout.total()))
    throw ContractViolation("germ length does not match the problem");
  StochasticProblem d = problem;

  if (layout.speed_dims > 0) {
    d.speed = {galerkin::Distribution::Constant, problem.speed.realize(xi[layout.speed_offset]), 0.0};
    d.guard_speed = problem.guard_speed.value_or(problem.speed.bound());
  }

  auto &ic = d.ic;
  switch (problem.ic.kind) {
    case InitialCondition::Kind::RandomSine: {
      int k = layout.ic_offset;
      const double a = problem.ic.alpha.germ_dims() ? problem.ic.alpha.realize(xi[k++]) : problem.ic.alpha.mean;
      const double b = problem.ic.beta.germ_dims() ? problem.ic.beta.realize(xi[k++]) : problem.ic.beta.mean;
      ic = InitialCondition{};
      ic.kind = InitialCondition::Kind::Deterministic;
      ic.fn = [a, b](const Vec2 &x) { return a * std::sin(b * x.x); };
      break;
    }
    case InitialCondition::Kind::KL: {
      const auto values = fields::kl_realize(
          *problem.ic.kl, xi.subspan(static_cast<std::size_t>(layout.ic_offset),
                                     static_cast<std::size_t>(layout.ic_dims)));
      ic = InitialCondition{};
      ic.kind = InitialCondition::Kind::Field;
      ic.values_u = values;
      if (problem.components() == 2) ic.values_v = values;
      break;
    }
    default:
      break;
  }

  if (layout.viscosity_dims > 0) {
    const auto &kl = *problem.viscosity.kl;
    const std::size_t n = kl.nodes();
    std::vector<double> nu(n);
    std::size_t low = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double v = problem.viscosity.at(j);
      for (std::size_t k = 0; k < kl.size(); ++k)
        v += std::sqrt(kl.eigenvalues[k]) * kl.modes[k][j] *
             xi[static_cast<std::size_t>(layout.viscosity_offset) + k];
      if (v < kMinViscosity) {
        v = kMinViscosity;
        ++low;
      }
      nu[j] = v;
    }
    d.viscosity.kl.reset();
    d.viscosity.nodal = std::move(nu);
    if (clamped) *clamped += low;
  }

  auto fix_wall = [&](galerkin::DirichletValue &w) {
    if (!w.g) return;
    std::vector<double> sub;
    for (const int dim : w.dims) sub.push_back(xi[static_cast<std::size_t>(dim)]);
    const double value = w.g(sub);
    w.g = [value](std::span<const double>) { return value; };
    w.dims.clear();
  };
  fix_wall(d.wall_u);
  fix_wall(d.wall_v);
  return d;
}

post::MomentField solve_deterministic(const StochasticProblem &problem,
                                      const galerkin::SolverConfig &config) {
  if (galerkin::germ_layout(problem).total() != 0)
    throw ConfigError("deterministic solve needs a problem without random inputs");
  galerkin::SolverConfig c = config;
  c.order = 0;
  galerkin::GalerkinSolver solver(problem, c);
  post::MomentField out;
  out.source = post::Source::MCS;
  solver.run([&](const galerkin::State &s) { post::append_state(out, solver, s); });
  return out;
}

void Welford::add(std::span<const double> x) {
  if (count == 0) {
    mean.assign(x.size(), 0.0);
    m2.assign(x.size(), 0.0);
  }
  ++count;
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - mean[k];
    mean[k] += d * inv;
    m2[k] += d * (x[k] - mean[k]);
  }
}

void Welford::merge(const Welford &o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(o.count);
  const double n = na + nb;
  for (std::size_t k = 0; k < mean.size(); ++k) {
    const double d = o.mean[k] - mean[k];
    mean[k] += d * nb / n;
    m2[k] += o.m2[k] + d * d * na * nb / n;
  }
  count += o.count;
}

CampaignResult run_campaign(const StochasticProblem &problem, const CampaignConfig &config) {
  if (config.samples < 2) throw ConfigError("mc.samples: at least two samples are needed");
  if (config.block == 0) throw ConfigError("mc.block: must be >= 1");
  galerkin::validate_problem(problem);
  const int dims = galerkin::germ_layout(problem).total();
  const std::size_t blocks = (config.samples + config.block - 1) / config.block;
  const int threads = std::max(1, std::min<int>(config.threads > 0 ? config.threads : thread_count(),
                                                static_cast<int>(blocks)));
  galerkin::SolverConfig solver_config = config.solver;
  solver_config.order = 0;

  std::vector<Welford> acc(blocks);
  post::MomentField layout;
  std::vector<std::size_t> clamped(blocks, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;
  std::string failure;
  bool numerical = true;

  const auto start = std::chrono::steady_clock::now();
  auto worker = [&]() {
    // Workers inside a campaign never start nested particle threads.
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks || failed.load()) return;
      const std::size_t lo = b * config.block;
      const std::size_t hi = std::min(lo + config.block, config.samples);
      for (std::size_t s = lo; s < hi && !failed.load(); ++s) {
        const auto xi = config.germ_override ? config.germ_override(s) : draw_germ(config.seed, s, dims);
        try {
          const auto d = realize(problem, xi, &clamped[b]);
          const auto traj = solve_deterministic(d, solver_config);
          acc[b].add(traj.mean);
          if (b == 0 && s == 0) {
            std::lock_guard lock(mutex);
            layout = traj;
          }
        } catch (const std::exception &e) {
          std::lock_guard lock(mutex);
          if (!failed.exchange(true)) {
            std::ostringstream msg;
            msg << "Monte Carlo sample " << s << " failed (germ";
            for (const double x : xi) msg << ' ' << x;
            msg << "): " << e.what();
            failure = msg.str();
            numerical = dynamic_cast<const NumericalError *>(&e) != nullptr;
          }
        }
      }
    }
  };

  const int saved = thread_count();
  set_thread_count(1);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  set_thread_count(saved);
  if (failed) {
    if (numerical) throw NumericalError(failure);
    throw ConfigError(failure);
  }

  // Pairwise tree merge over block slots in fixed order.
  for (std::size_t width = 1; width < blocks; width *= 2)
    for (std::size_t i = 0; i + width < blocks; i += 2 * width) acc[i].merge(acc[i + width]);
  const Welford &total = acc[0];

  CampaignResult r;
  r.samples = total.count;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto c : clamped) r.clamped_nodes += c;
  r.moments = layout;
  r.moments.source = post::Source::MCS;
  r.moments.mean = total.mean;
  r.moments.stddev.resize(total.m2.size());
  const double denom = static_cast<double>(total.count - 1);
  for (std::size_t k = 0; k < total.m2.size(); ++k)
    r.moments.stddev[k] = std::sqrt(std::max(0.0, total.m2[k]) / denom);
  return r;
}

}  // namespace ssph::mc
