#include "ssph/post/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ssph/common/error.hpp"

namespace ssph::post {

SsphRun run_ssph(const galerkin::StochasticProblem &problem, const galerkin::SolverConfig &config) {
  SsphRun r;
  const auto start = std::chrono::steady_clock::now();
  galerkin::GalerkinSolver solver(problem, config);
  r.moments.source = Source::SSPH;
  solver.run([&](const galerkin::State &s) { append_state(r.moments, solver, s); });
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.rows = solver.rows();
  return r;
}

ErrorReport convergence_study(const galerkin::StochasticProblem &problem,
                              const galerkin::SolverConfig &config, std::vector<int> orders,
                              const MomentField &baseline) {
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  ErrorReport report;
  for (const int q : orders) {
    galerkin::SolverConfig c = config;
    c.order = q;
    const auto run = run_ssph(problem, c);
    report.rows.push_back({q, relative_l2(run.moments, baseline, Moment::Mean, kErrorMinStep).value,
                           relative_l2(run.moments, baseline, Moment::Std, kErrorMinStep).value,
                           run.seconds});
  }
  return report;
}

namespace {
std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_error_csv(std::ostream &os, const ErrorReport &report) {
  os << "q,err_mean,err_std,seconds\n";
  for (const auto &r : report.rows)
    os << r.order << ',' << g17(r.err_mean) << ',' << g17(r.err_std) << ',' << g17(r.seconds) << '\n';
}

Speedup speedup_report(double ssph_seconds, int order, double mcs_seconds, std::size_t samples) {
  if (!(ssph_seconds > 0.0)) throw DomainError("S-SPH wall-clock must be positive");
  return {mcs_seconds / ssph_seconds, mcs_seconds, ssph_seconds, samples, order};
}

void write_timing(std::ostream &os, const Speedup &s) {
  os << "samples = " << s.samples << '\n'
     << "mcs_seconds = " << g17(s.mcs_seconds) << '\n'
     << "mcs_seconds_per_sample = " << g17(s.samples ? s.mcs_seconds / static_cast<double>(s.samples) : 0.0) << '\n'
     << "order = " << s.order << '\n'
     << "ssph_seconds = " << g17(s.ssph_seconds) << '\n'
     << "speedup = " << g17(s.ratio) << '\n';
}

void write_probes_csv(std::ostream &os, const MomentField &a, const MomentField &b,
                      const std::vector<double> &xs, const std::vector<double> &ts) {
  if (a.steps != b.steps || a.nodes() != b.nodes()) throw ContractViolation("probe fields differ in grid");
  // Candidate nodes: the whole line in 1D, y = 0.5 in 2D.
  std::vector<std::size_t> line;
  double y_line = 0.0;
  if (a.dim == 2) {
    double best = 1e300;
    for (const auto &p : a.positions) best = std::min(best, std::abs(p.y - 0.5));
    for (const auto &p : a.positions)
      if (std::abs(std::abs(p.y - 0.5) - best) < 1e-12) {
        y_line = p.y;
        break;
      }
  }
  for (std::size_t j = 0; j < a.nodes(); ++j)
    if (a.dim == 1 || std::abs(a.positions[j].y - y_line) < 1e-12) line.push_back(j);
  std::sort(line.begin(), line.end(),
            [&](std::size_t p, std::size_t q) { return a.positions[p].x < a.positions[q].x; });

  os << "kind,coord,t_or_x,ssph_val,mcs_val,which_moment\n";
  auto emit = [&](const char *kind, double coord, double at, std::size_t idx) {
    os << kind << ',' << g17(coord) << ',' << g17(at) << ',' << g17(a.mean[idx]) << ','
       << g17(b.mean[idx]) << ",mean\n";
    os << kind << ',' << g17(coord) << ',' << g17(at) << ',' << g17(a.stddev[idx]) << ','
       << g17(b.stddev[idx]) << ",std\n";
  };
  for (const double x : xs) {
    std::size_t node = line.front();
    for (const auto j : line)
      if (std::abs(a.positions[j].x - x) < std::abs(a.positions[node].x - x)) node = j;
    for (std::size_t o = 0; o < a.outputs(); ++o) emit("temporal", x, a.times[o], a.index(o, 0, node));
  }
  for (const double t : ts) {
    for (std::size_t o = 0; o < a.outputs(); ++o) {
      if (std::abs(a.times[o] - t) > 1e-9 * std::max(1.0, std::abs(t))) continue;
      for (const auto j : line) emit("spatial", t, a.positions[j].x, a.index(o, 0, j));
      break;
    }
  }
}

}  // namespace ssph::post
