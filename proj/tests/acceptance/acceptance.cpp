// Acceptance checks. Each criterion prints exactly one PASS/FAIL line.
// Usage: ssph_acceptance [criterion numbers...]  (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ssph/bench/spec.hpp"
#include "ssph/common/parallel.hpp"
#include "ssph/galerkin/solver.hpp"
#include "ssph/mc/campaign.hpp"
#include "ssph/post/report.hpp"
#include "ssph/sph/derivative.hpp"

using namespace ssph;
using galerkin::Distribution;
using galerkin::GalerkinSolver;
using galerkin::InitialCondition;
using galerkin::OperatorKind;
using galerkin::StochasticProblem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// 1: zero-variance inputs against a plain deterministic SPH integrator.

// Deterministic right-hand side written directly on the SPH operator.
using Rhs = std::function<void(const std::vector<double> &, std::vector<double> &)>;

struct Degenerate {
  double max_row0 = 0.0;
  double max_higher = 0.0;
};

Degenerate compare_with_plain_sph(const StochasticProblem &problem, int order, const Rhs &plain_rhs,
                                  const std::function<void(std::vector<double> &)> &fix,
                                  const std::function<double(const Vec2 &)> &u0,
                                  const std::function<double(const Vec2 &)> &v0) {
  GalerkinSolver solver(problem, {.order = order});
  const std::size_t n = solver.particles();
  const bool two = solver.components() == 2;
  galerkin::State st = solver.initial_state();

  std::vector<double> y(two ? 2 * n : n);
  for (std::size_t j = 0; j < n; ++j) {
    y[j] = u0(solver.system().position(j));
    if (two) y[n + j] = v0(solver.system().position(j));
  }
  fix(y);

  Degenerate d;
  auto measure = [&]() {
    for (std::size_t j = 0; j < solver.system().real_count(); ++j) {
      d.max_row0 = std::max(d.max_row0, std::abs(st.u[j] - y[j]));
      if (two) d.max_row0 = std::max(d.max_row0, std::abs(st.v[j] - y[n + j]));
    }
    for (std::size_t k = n; k < st.u.size(); ++k) {
      d.max_higher = std::max(d.max_higher, std::abs(st.u[k]));
      if (two) d.max_higher = std::max(d.max_higher, std::abs(st.v[k]));
    }
  };
  measure();
  const std::size_t steps = problem.step_count();
  for (std::size_t s = 0; s < steps; ++s) {
    solver.step(st);
    galerkin::heun_step(y, problem.dt, plain_rhs, fix);
    measure();
  }
  return d;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool pass = true;
  auto record = [&](const char *name, const Degenerate &d) {
    const bool ok = d.max_row0 <= 1e-10 && d.max_higher <= 1e-12;
    pass = pass && ok;
    detail << fmt(" %s row0=%.2e rows>=1=%.2e;", name, d.max_row0, d.max_higher);
  };

  {  // Advection, Gaussian speed with zero spread.
    StochasticProblem p;
    p.op = OperatorKind::Advection1D;
    p.lattice = {1, 128, sph::Topology::Periodic, 1.2, 2.0};
    p.speed = {Distribution::Gaussian, 0.06, 0.0};
    p.ic.fn = [](const Vec2 &x) { return std::sin(2 * kPi * x.x); };
    p.dt = 2e-3;
    p.t_end = 0.5;
    const auto sys = sph::make_lattice(p.lattice);
    const auto nb = sph::generate_neighbor_list(sys);
    const sph::SmoothingKernel k(sph::KernelFamily::CubicSpline, sph::lattice_smoothing_length(p.lattice), 1);
    const sph::DerivativeOperator D(sys, nb, k, true);
    const Rhs f = [&](const std::vector<double> &u, std::vector<double> &out) {
      out.assign(u.size(), 0.0);
      D.apply(u, Axis::X, out);
      for (double &v : out) v *= 0.06;
    };
    record("advection", compare_with_plain_sph(p, 5, f, [](std::vector<double> &) {}, p.ic.fn, {}));
  }
  {  // Burgers, random-sine IC with zero spread in amplitude and wavenumber.
    StochasticProblem p;
    p.op = OperatorKind::Burgers1D;
    p.lattice = {1, 128, sph::Topology::Periodic, 1.2, 2.0};
    p.ic.kind = InitialCondition::Kind::RandomSine;
    p.ic.alpha = {Distribution::Gaussian, 0.25, 0.0};
    p.ic.beta = {Distribution::Gaussian, 2 * kPi, 0.0};
    p.dt = 1e-3;
    p.t_end = 0.2;
    const auto sys = sph::make_lattice(p.lattice);
    const auto nb = sph::generate_neighbor_list(sys);
    const sph::SmoothingKernel k(sph::KernelFamily::CubicSpline, sph::lattice_smoothing_length(p.lattice), 1);
    const sph::DerivativeOperator D(sys, nb, k, true);
    const Rhs f = [&](const std::vector<double> &u, std::vector<double> &out) {
      std::vector<double> d(u.size());
      D.apply(u, Axis::X, d);
      out.resize(u.size());
      for (std::size_t j = 0; j < u.size(); ++j) out[j] = -u[j] * d[j];
    };
    record("burgers1d", compare_with_plain_sph(p, 3, f, [](std::vector<double> &) {},
                                               [](const Vec2 &x) { return 0.25 * std::sin(2 * kPi * x.x); }, {}));
  }
  {  // Two-dimensional viscous Burgers, random viscosity field with zero eigenvalues.
    StochasticProblem p;
    p.op = OperatorKind::Burgers2D;
    p.lattice = {2, 32, sph::Topology::DirichletGhost, 1.6, 2.0};
    p.viscosity.mean = 0.05;
    std::vector<double> ax(33);
    for (int i = 0; i <= 32; ++i) ax[i] = i / 32.0;
    auto kl = fields::kl_decompose_lattice({1e-4, 0.2}, ax, fields::lattice_weights(1, 33, 1.0 / 32, true),
                                           fields::FixedModes{4}, std::vector<double>(33 * 33, 0.05));
    for (double &l : kl.eigenvalues) l = 0.0;
    p.viscosity.kl = std::make_shared<fields::KLExpansion>(kl);
    auto u0 = [](const Vec2 &x) { return std::sin(2 * kPi * x.x) * std::sin(2 * kPi * x.y); };
    p.ic.fn = u0;
    p.dt = 1e-3;
    p.t_end = 0.1;
    const auto sys = sph::make_lattice(p.lattice);
    const auto nb = sph::generate_neighbor_list(sys);
    const sph::SmoothingKernel k(sph::KernelFamily::CubicSpline, sph::lattice_smoothing_length(p.lattice), 2);
    const sph::DerivativeOperator D(sys, nb, k, true);
    const std::size_t n = sys.size(), nr = sys.real_count();
    auto d = [&](std::span<const double> f, Axis a) {
      std::vector<double> out(n);
      D.apply(f, a, out);
      return out;
    };
    const Rhs f = [&](const std::vector<double> &y, std::vector<double> &out) {
      const std::span<const double> u(y.data(), n), v(y.data() + n, n);
      const auto ux = d(u, Axis::X), vy = d(v, Axis::Y);
      const auto uxx = d(ux, Axis::X), uyy = d(d(u, Axis::Y), Axis::Y);
      const auto vxx = d(d(v, Axis::X), Axis::X), vyy = d(vy, Axis::Y);
      out.assign(2 * n, 0.0);
      for (std::size_t j = 0; j < nr; ++j) {
        const double s = u[j] + v[j];
        out[j] = -s * ux[j] + 0.05 * (uxx[j] + uyy[j]);
        out[n + j] = -s * vy[j] + 0.05 * (vxx[j] + vyy[j]);
      }
    };
    const auto fix = [&](std::vector<double> &y) {
      galerkin::apply_dirichlet_bc(sys, 1, {}, std::span(y).first(n));
      galerkin::apply_dirichlet_bc(sys, 1, {}, std::span(y).subspan(n, n));
    };
    record("burgers2d", compare_with_plain_sph(p, 2, f, fix, u0, u0));
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 60.0;
  return {pass, detail.str() + fmt(" %.1f s", secs)};
}

// ---------------------------------------------------------------------------
// Shared comparison of a preset against its Monte Carlo baseline.

struct Comparison {
  double err_mean = 0.0, err_std = 0.0, ssph_s = 0.0, mcs_s = 0.0;
  bool mean_absolute = false;
};

Comparison compare_preset(const bench::BenchmarkSpec &spec) {
  const auto problem = bench::build_problem(spec);
  const auto run = post::run_ssph(problem, bench::solver_config(spec));
  const auto mcs = mc::run_campaign(problem, bench::campaign_config(spec));
  Comparison c;
  const auto em = post::relative_l2(run.moments, mcs.moments, post::Moment::Mean, post::kErrorMinStep);
  const auto es = post::relative_l2(run.moments, mcs.moments, post::Moment::Std, post::kErrorMinStep);
  c.err_mean = em.value;
  c.mean_absolute = em.absolute;
  c.err_std = es.value;
  c.ssph_s = run.seconds;
  c.mcs_s = mcs.seconds;
  return c;
}

Outcome tolerance_check(const std::string &preset, double tol_mean, double tol_std, double limit_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = compare_preset(bench::preset(preset));
  const double secs = seconds_since(t0);
  const bool pass = c.err_mean <= tol_mean && c.err_std <= tol_std && secs < limit_s;
  return {pass, fmt(" %s err_mean=%.4f (<=%.2f) err_std=%.4f (<=%.2f) %.1f s", preset.c_str(), c.err_mean,
                    tol_mean, c.err_std, tol_std, secs)};
}

Outcome criterion2() { return tolerance_check("example1-gaussian-desk", 0.05, 0.15, 300.0); }

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = bench::preset("example1-gaussian-desk");
  const auto problem = bench::build_problem(spec);
  const auto mcs = mc::run_campaign(problem, bench::campaign_config(spec));
  const auto rep = post::convergence_study(problem, bench::solver_config(spec), {1, 2, 3, 4, 5}, mcs.moments);
  const double tie = 1.0 / std::sqrt(static_cast<double>(mcs.samples));
  bool monotone = true;
  double min_std = rep.rows[0].err_std;
  std::ostringstream errs;
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const auto &r = rep.rows[k];
    errs << fmt(" q%d=%.4f/%.4f", r.order, r.err_mean, r.err_std);
    min_std = std::min(min_std, r.err_std);
    if (k > 0) {
      monotone = monotone && r.err_mean <= rep.rows[k - 1].err_mean + tie;
      monotone = monotone && r.err_std <= rep.rows[k - 1].err_std + tie;
    }
  }
  const bool q3 = rep.rows[2].err_mean <= 1.5 * rep.rows[4].err_mean;
  const bool q5 = rep.rows[4].err_std <= 1.5 * min_std;
  const bool pass = monotone && q3 && q5;
  return {pass, fmt(" monotone(tie %.4f)=%s q3-mean-within-1.5x=%s q5-std-within-1.5x-min=%s;", tie,
                    monotone ? "yes" : "no", q3 ? "yes" : "no", q5 ? "yes" : "no") +
                    errs.str() + fmt(" %.1f s", seconds_since(t0))};
}

Outcome criterion4() {
  const auto spec = bench::preset("example1-lognormal-desk");
  GalerkinSolver solver(bench::build_problem(spec), bench::solver_config(spec));
  const double g00 = solver.speed_tensor()(0, 0);
  const bool g_ok = std::abs(g00 - spec.speed_mean) <= 1e-8;
  auto o = tolerance_check("example1-lognormal-desk", 0.05, 0.15, 300.0);
  o.pass = o.pass && g_ok;
  o.detail += fmt(" G2[0][0]-mean=%.2e", g00 - spec.speed_mean);
  return o;
}

Outcome criterion5() {
  const auto spec = bench::preset("example2-random-sine-desk");
  const double tb = bench::breaking_time_estimate(spec);
  auto o = tolerance_check("example2-random-sine-desk", 0.05, 0.20, 600.0);
  o.pass = o.pass && spec.t_end <= tb;
  o.detail += fmt(" T=%.2f breaking=%.3f", spec.t_end, tb);
  return o;
}

// Decay rate of the sin(2 pi x) sin(2 pi y) mode under pure diffusion.
double diffusion_rate(double nu) {
  StochasticProblem p;
  p.op = OperatorKind::Burgers2D;
  p.lattice = {2, 48, sph::Topology::DirichletGhost, 1.6, 2.0};
  p.advection_enabled = false;
  p.viscosity.mean = nu;
  p.ic.fn = [](const Vec2 &x) { return std::sin(2 * kPi * x.x) * std::sin(2 * kPi * x.y); };
  p.dt = 1e-3;
  p.t_end = 0.1;
  GalerkinSolver s(p, {.order = 0});
  const auto a = s.initial_state();
  const auto b = s.run();
  double na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < s.system().real_count(); ++j) {
    na += a.u[j] * a.u[j];
    nb += b.u[j] * b.u[j];
  }
  return std::log(std::sqrt(nb / na)) / b.t;
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto f = tolerance_check("example3-fourier-desk", 0.10, 0.30, 900.0);
  const auto v = tolerance_check("example3-random-viscosity-desk", 0.10, 0.30, 900.0);
  const double nu = bench::preset("example3-random-viscosity-desk").viscosity_mean;
  const double rate = diffusion_rate(nu);
  const double exact = -8.0 * kPi * kPi * nu;
  const bool rate_ok = std::abs(rate / exact - 1.0) <= 0.05;
  const double secs = seconds_since(t0);
  return {f.pass && v.pass && rate_ok && secs < 900.0,
          f.detail + ";" + v.detail + fmt("; decay rate %.4f vs %.4f (%.1f%%); %.1f s", rate, exact,
                                          100.0 * std::abs(rate / exact - 1.0), secs)};
}

Outcome criterion7() {
  auto spec = bench::preset("example1-gaussian-desk");
  spec.samples = 5000;
  spec.order = 5;
  set_thread_count(1);
  const auto problem = bench::build_problem(spec);
  const auto run = post::run_ssph(problem, bench::solver_config(spec));
  auto cfg = bench::campaign_config(spec);
  cfg.threads = 1;
  const auto mcs = mc::run_campaign(problem, cfg);
  const auto s = post::speedup_report(run.seconds, spec.order, mcs.seconds, mcs.samples);
  return {s.ratio >= 50.0, fmt(" speedup=%.0fx (>=50) mcs=%.2f s ssph=%.4f s", s.ratio, s.mcs_seconds, s.ssph_seconds)};
}

Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string cmd = std::string("\"") + SSPH_UNIT_TESTS + "\" --test-case=\"property:*\" > property_suites.log 2>&1";
  const int rc = std::system(cmd.c_str());
  const double secs = seconds_since(t0);
  return {rc == 0 && secs < 300.0, fmt(" property test cases exit=%d %.1f s (log: property_suites.log)", rc, secs)};
}

}  // namespace

int main(int argc, char **argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 8; ++i) which.push_back(i);
  set_thread_count(1);
  int failures = 0;
  for (const int c : which) {
    if (c < 1 || c > 8) {
      std::printf("FAIL criterion %d: unknown criterion\n", c);
      ++failures;
      continue;
    }
    Outcome o;
    try {
      o = criteria[c - 1]();
    } catch (const std::exception &e) {
      o = {false, std::string(" exception: ") + e.what()};
    }
    std::printf("%s criterion %d:%s\n", o.pass ? "PASS" : "FAIL", c, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
