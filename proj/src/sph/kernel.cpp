#include "ssph/sph/kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ssph/common/error.hpp"

namespace ssph::sph {

namespace {

constexpr double kGaussianCutoff = 3.0;

void require_finite(const Vec2 &r) {
  if (!std::isfinite(r.x) || !std::isfinite(r.y)) {
    std::ostringstream msg;
    msg << "kernel evaluated at non-finite displacement (" << r.x << ", " << r.y << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

SmoothingKernel::SmoothingKernel(KernelFamily family, double smoothing_length, int dim)
    : family_(family), h_(smoothing_length), dim_(dim) {
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ConfigError("smoothing length must be positive");
  if (dim_ != 1 && dim_ != 2) throw ConfigError("kernel dimension must be 1 or 2");
  const double hd = dim_ == 1 ? h_ : h_ * h_;
  switch (family_) {
    case KernelFamily::CubicSpline:
      norm_ = (dim_ == 1 ? 2.0 / 3.0 : 10.0 / (7.0 * std::numbers::pi)) / hd;
      break;
    case KernelFamily::Gaussian: {
      const double truncated_mass = dim_ == 1
                                        ? std::erf(kGaussianCutoff)
                                        : 1.0 - std::exp(-kGaussianCutoff * kGaussianCutoff);
      const double base = dim_ == 1 ? 1.0 / std::sqrt(std::numbers::pi) : 1.0 / std::numbers::pi;
      norm_ = base / (hd * truncated_mass);
      break;
    }
  }
}

double SmoothingKernel::support_radius() const {
  return family_ == KernelFamily::CubicSpline ? 2.0 * h_ : kGaussianCutoff * h_;
}

double SmoothingKernel::radial_value(double s) const {
  if (family_ == KernelFamily::CubicSpline) {
    if (s < 1.0) return 1.0 - 1.5 * s * s + 0.75 * s * s * s;
    if (s < 2.0) {
      const double t = 2.0 - s;
      return 0.25 * t * t * t;
    }
    return 0.0;
  }
  return s < kGaussianCutoff ? std::exp(-s * s) : 0.0;
}

double SmoothingKernel::radial_slope(double s) const {
  if (family_ == KernelFamily::CubicSpline) {
    if (s < 1.0) return -3.0 * s + 2.25 * s * s;
    if (s < 2.0) {
      const double t = 2.0 - s;
      return -0.75 * t * t;
    }
    return 0.0;
  }
  return s < kGaussianCutoff ? -2.0 * s * std::exp(-s * s) : 0.0;
}

double SmoothingKernel::value(const Vec2 &r) const {
  require_finite(r);
  return norm_ * radial_value(norm(r) / h_);
}

Vec2 SmoothingKernel::gradient(const Vec2 &r) const {
  require_finite(r);
  const double dist = norm(r);
  if (dist == 0.0) return {};
  const double slope = norm_ * radial_slope(dist / h_) / h_;
  return r * (slope / dist);
}

double kernel_value(const Vec2 &r, const SmoothingKernel &kernel) { return kernel.value(r); }

Vec2 kernel_gradient(const Vec2 &r, const SmoothingKernel &kernel) { return kernel.gradient(r); }

}  // namespace ssph::sph
