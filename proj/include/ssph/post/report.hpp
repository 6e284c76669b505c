#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssph/galerkin/problem.hpp"
#include "ssph/galerkin/solver.hpp"
#include "ssph/post/moments.hpp"

namespace ssph::post {

struct SsphRun {
  MomentField moments;
  double seconds = 0.0;  // solver construction and integration
  std::size_t rows = 0;
};

SsphRun run_ssph(const galerkin::StochasticProblem &problem, const galerkin::SolverConfig &config);

struct ErrorRow {
  int order = 0;
  double err_mean = 0.0;
  double err_std = 0.0;
  double seconds = 0.0;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;  // sorted by order
  double mcs_seconds = 0.0;
  std::size_t samples = 0;
};

/// Re-solves at every order and compares with the baseline (steps below
/// kErrorMinStep excluded).
ErrorReport convergence_study(const galerkin::StochasticProblem &problem,
                              const galerkin::SolverConfig &config, std::vector<int> orders,
                              const MomentField &baseline);

/// "q,err_mean,err_std,seconds"
void write_error_csv(std::ostream &os, const ErrorReport &report);

struct Speedup {
  double ratio = 0.0;  // MCS seconds / S-SPH seconds
  double mcs_seconds = 0.0;
  double ssph_seconds = 0.0;
  std::size_t samples = 0;
  int order = 0;
};

Speedup speedup_report(double ssph_seconds, int order, double mcs_seconds, std::size_t samples);

/// Key-value timing report.
void write_timing(std::ostream &os, const Speedup &s);

/// Probe slices in long format
/// "kind,coord,t_or_x,ssph_val,mcs_val,which_moment": temporal histories at
/// the nodes nearest the given x, spatial profiles at the given times (only
/// times that are output levels of both fields). Two-dimensional fields are
/// probed along y = 0.5 for the first component.
void write_probes_csv(std::ostream &os, const MomentField &ssph, const MomentField &mcs,
                      const std::vector<double> &xs, const std::vector<double> &ts);

}  // namespace ssph::post
