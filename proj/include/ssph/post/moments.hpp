#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssph/common/vec2.hpp"

namespace ssph::galerkin {
struct State;
class GalerkinSolver;
}  // namespace ssph::galerkin

namespace ssph::post {

enum class Source { SSPH, MCS };

/// Mean and standard deviation of every velocity component on the real
/// particles at a sequence of output steps. Values are indexed
/// [(output * components + c) * nodes + j].
struct MomentField {
  Source source = Source::SSPH;
  std::string spec_hash;
  int dim = 1;
  int components = 1;
  std::vector<double> times;
  std::vector<std::size_t> steps;
  std::vector<Vec2> positions;
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t nodes() const { return positions.size(); }
  std::size_t outputs() const { return times.size(); }
  std::size_t index(std::size_t output, int component, std::size_t j) const {
    return (output * static_cast<std::size_t>(components) + static_cast<std::size_t>(component)) *
               nodes() + j;
  }
  /// Appends one output level (mean/std already laid out per component).
  void append(double t, std::size_t step, const std::vector<double> &m, const std::vector<double> &s);
};

/// mean = row 0, std = sqrt(sum_{l>=1} row_l^2) at every real particle, for
/// `rows` chaos rows stored with stride `n` (total particles).
void moments_from_rows(const std::vector<double> &rows_data, std::size_t rows, std::size_t n,
                       std::size_t real, std::vector<double> &mean, std::vector<double> &stddev);

/// Observer helper: appends the moments of a solver state.
void append_state(MomentField &field, const galerkin::GalerkinSolver &solver,
                  const galerkin::State &state);

enum class Moment { Mean, Std };

struct RelativeError {
  double value = 0.0;
  bool absolute = false;  // reference norm was below 1e-14; value is |a|
};

/// |a - b|_2 / |b|_2 over all outputs with step >= min_step, all components
/// and nodes. Throws ContractViolation on grid mismatch.
RelativeError relative_l2(const MomentField &a, const MomentField &b, Moment which,
                          std::size_t min_step = 0);

/// Steps excluded from error norms (start-up transient).
inline constexpr std::size_t kErrorMinStep = 5;

/// CSV with columns t,x[,y],mean[,std] per component; a leading
/// "# spec_hash=..." line carries the metadata hash.
void write_moments_csv(std::ostream &os, const MomentField &field);
MomentField read_moments_csv(std::istream &is);

}  // namespace ssph::post
