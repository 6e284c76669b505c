#pragma once

#include "ssph/common/vec2.hpp"

namespace ssph::sph {

enum class KernelFamily { CubicSpline, Gaussian };

/// Radially symmetric smoothing kernel W(|r|; h) in one or two dimensions.
///
/// CubicSpline is the M4 B-spline with compact support 2h. Gaussian is
/// truncated at 3h and renormalised so the truncated kernel still integrates
/// to one.
class SmoothingKernel {
 public:
  SmoothingKernel(KernelFamily family, double smoothing_length, int dim);

  KernelFamily family() const { return family_; }
  double smoothing_length() const { return h_; }
  int dim() const { return dim_; }
  double support_radius() const;

  double value(const Vec2 &r) const;

  /// Gradient of W with respect to the displacement r. Passing
  /// r = x_j - x_k gives the gradient with respect to x_j.
  Vec2 gradient(const Vec2 &r) const;

 private:
  double radial_value(double s) const;
  double radial_slope(double s) const;

  KernelFamily family_;
  double h_;
  int dim_;
  double norm_;
};

double kernel_value(const Vec2 &r, const SmoothingKernel &kernel);
Vec2 kernel_gradient(const Vec2 &r, const SmoothingKernel &kernel);

}  // namespace ssph::sph
