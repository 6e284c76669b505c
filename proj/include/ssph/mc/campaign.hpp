#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ssph/galerkin/problem.hpp"
#include "ssph/galerkin/solver.hpp"
#include "ssph/post/moments.hpp"

namespace ssph::mc {

/// Lower bound applied to realised viscosity fields.
inline constexpr double kMinViscosity = 1e-6;

/// Standard-normal germ for sample `index`, from the counter stream keyed by
/// (seed, index).
std::vector<double> draw_germ(std::uint64_t seed, std::uint64_t index, int dims);

/// The deterministic problem obtained by fixing every random input at germ
/// `xi`. Realised viscosity below kMinViscosity is clamped; the number of
/// clamped nodes is added to `clamped` when given.
galerkin::StochasticProblem realize(const galerkin::StochasticProblem &problem,
                                    std::span<const double> xi, std::size_t *clamped = nullptr);

/// Deterministic trajectory (output steps only) of a problem without random
/// inputs, solved through the Galerkin path with a single chaos row.
post::MomentField solve_deterministic(const galerkin::StochasticProblem &problem,
                                      const galerkin::SolverConfig &config);

struct CampaignConfig {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::size_t block = 32;
  int threads = 0;  // 0 = ssph::thread_count()
  galerkin::SolverConfig solver;
  /// Replaces the drawn germ for a sample when set.
  std::function<std::vector<double>(std::size_t)> germ_override;
};

struct CampaignResult {
  post::MomentField moments;  // source MCS, unbiased std
  std::size_t samples = 0;
  double seconds = 0.0;
  std::size_t clamped_nodes = 0;
};

/// Streaming Monte Carlo estimate of mean and standard deviation. Samples
/// are grouped in fixed blocks whose Welford accumulators are merged in a
/// fixed pairwise tree, so the result depends only on (seed, samples, block).
CampaignResult run_campaign(const galerkin::StochasticProblem &problem,
                            const CampaignConfig &config);

/// Running (count, mean, M2) over vectors of fixed length.
struct Welford {
  std::size_t count = 0;
  std::vector<double> mean;
  std::vector<double> m2;

  void add(std::span<const double> x);
  /// Chan et al. pairwise combination.
  void merge(const Welford &other);
};

}  // namespace ssph::mc
