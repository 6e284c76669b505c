#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ssph/galerkin/problem.hpp"
#include "ssph/galerkin/solver.hpp"
#include "ssph/mc/campaign.hpp"

namespace ssph::bench {

/// Plain-data benchmark definition. Every field has a config-file key; see
/// write_spec for the section layout.
struct BenchmarkSpec {
  std::string id = "custom";
  std::string op = "advection1d";  // advection1d | burgers1d | burgers2d

  // [grid]
  int cells = 512;
  std::string topology = "periodic";  // periodic | dirichlet
  double h_factor = 1.2;
  double radius_factor = 2.0;
  std::string kernel = "cubic";  // cubic | gaussian

  // [time]
  double dt = 1e-3;
  double t_end = 0.5;

  // [speed]
  std::string speed_law = "gaussian";  // constant | gaussian | lognormal
  double speed_mean = 0.06;
  double speed_std = 0.1;

  // [ic]
  std::string ic = "sine";  // sine | random_sine | grf | fourier | sine2d
  double ic_amplitude = 1.0;
  std::string alpha_law = "gaussian";
  double alpha_mean = 0.25;
  double alpha_std = 0.1;
  std::string beta_law = "gaussian";
  double beta_mean = 6.283185307179586;
  double beta_std = 0.1;
  double grf_mean_amplitude = 0.01;
  double grf_variance = 1e-3;
  double grf_length = 0.01;
  int grf_modes = 5;
  int fourier_max_mode = 4;
  int fourier_draws = 2000;
  std::uint64_t fourier_seed = 7;
  int fourier_kl_modes = 4;

  // [viscosity]
  double viscosity_mean = 0.05;
  bool viscosity_random = false;
  double viscosity_variance = 1e-4;
  double viscosity_length = 0.2;
  int viscosity_modes = 4;

  // [operator]
  std::string advection_form = "verbatim";  // verbatim | standard
  bool advection = true;

  // [chaos]
  int order = 5;

  // [solver]
  std::string stepper = "eulerian";  // eulerian | lagrangian
  bool corrected = true;
  double cfl_guard = 0.25;
  int output_stride = 10;

  // [mc]
  int samples = 5000;
  std::uint64_t seed = 20240601;
  int block = 32;

  // [tolerance]
  double tol_mean = 0.05;
  double tol_std = 0.15;

  // [meta] assumptions not fixed by the published setup, recorded in outputs
  std::string assumptions;
};

/// Names accepted by preset().
std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
BenchmarkSpec preset(const std::string &name);

/// Sectioned key-value text; every field is written with full precision so
/// read_spec(write_spec(s)) == s.
void write_spec(std::ostream &os, const BenchmarkSpec &spec);
std::string dump_spec(const BenchmarkSpec &spec);
/// Unknown sections or keys and malformed values raise ConfigError.
BenchmarkSpec read_spec(std::istream &is);
BenchmarkSpec load_spec(const std::string &path);

bool operator==(const BenchmarkSpec &a, const BenchmarkSpec &b);

/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string spec_hash(const BenchmarkSpec &spec);

/// Field-level checks; throws ConfigError naming the offending key.
void validate(const BenchmarkSpec &spec);

/// Smallest of 1/max|u0'| over `samples` initial conditions drawn from the
/// spec (Burgers only); infinity when the IC has no slope.
double breaking_time_estimate(const BenchmarkSpec &spec, int samples = 200);

/// Assembles the stochastic problem (including KL decompositions).
galerkin::StochasticProblem build_problem(const BenchmarkSpec &spec);

galerkin::SolverConfig solver_config(const BenchmarkSpec &spec);
mc::CampaignConfig campaign_config(const BenchmarkSpec &spec);

}  // namespace ssph::bench
