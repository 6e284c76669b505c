#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ssph/common/error.hpp"
#include "ssph/common/rng.hpp"
#include "ssph/fields/fourier.hpp"
#include "ssph/fields/karhunen_loeve.hpp"

using namespace ssph;
using namespace ssph::fields;

namespace {

std::vector<Vec2> line_nodes(std::size_t n) {
  std::vector<Vec2> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = {static_cast<double>(i) / n, 0.0};
  return x;
}

std::vector<Vec2> square_nodes(std::size_t n, double dx) {
  std::vector<Vec2> x;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) x.push_back({i * dx, j * dx});
  return x;
}

double weighted_dot(const std::vector<double> &a, const std::vector<double> &b, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("eigenvalues match an independent dense solve") {
  // Reference values from a symmetric eigensolver on W^1/2 K W^1/2.
  const auto x = line_nodes(32);
  const std::vector<double> w(32, 1.0 / 32);
  const auto kl = kl_decompose({2.0, 0.2}, x, w, FixedModes{4});
  const double ref[] = {0.6593786404634077, 0.530851438545196, 0.3708252118728012, 0.22564551803822336};
  REQUIRE(kl.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(kl.eigenvalues[k] == doctest::Approx(ref[k]).epsilon(1e-10));
}

TEST_CASE("property: trace identity, orthonormal modes and reconstruction") {
  const auto x = square_nodes(9, 1.0 / 8);
  const auto w = lattice_weights(2, 9, 1.0 / 8, true);
  const CovarianceKernel k{0.7, 0.3};
  const auto kl = kl_decompose(k, x, w, FixedModes{x.size()});
  double trace = 0.0, wsum = 0.0;
  for (double l : kl.spectrum) trace += l;
  for (double v : w) wsum += v;
  CHECK(trace == doctest::Approx(0.7 * wsum).epsilon(1e-8));
  for (std::size_t a = 0; a < 12; ++a)
    for (std::size_t b = 0; b < 12; ++b)
      CHECK(weighted_dot(kl.modes[a], kl.modes[b], w) == doctest::Approx(a == b ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
  // Full expansion reproduces the covariance matrix.
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); i += 7)
    for (std::size_t j = 0; j < x.size(); j += 5) {
      double c = 0.0;
      for (std::size_t m = 0; m < kl.size(); ++m) c += kl.eigenvalues[m] * kl.modes[m][i] * kl.modes[m][j];
      worst = std::max(worst, std::abs(c - k(x[i], x[j])));
    }
  CHECK(worst < 1e-8);
  CHECK(kl.energy_fraction == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("property: eigenvalues descend, are nonnegative, and energy fraction is consistent") {
  const auto x = line_nodes(64);
  const std::vector<double> w(64, 1.0 / 64);
  const auto kl = kl_decompose({1.0, 0.05}, x, w, EnergyTarget{0.9});
  double total = 0.0, kept = 0.0;
  for (std::size_t k = 0; k < kl.spectrum.size(); ++k) {
    CHECK(kl.spectrum[k] >= 0.0);
    if (k) CHECK(kl.spectrum[k] <= kl.spectrum[k - 1]);
    total += kl.spectrum[k];
  }
  for (double l : kl.eigenvalues) kept += l;
  CHECK(kl.energy_fraction == doctest::Approx(kept / total));
  CHECK(kl.energy_fraction >= 0.9);
  // Minimal: dropping the last kept mode falls below the target.
  CHECK((kept - kl.eigenvalues.back()) / total < 0.9);
  std::ostringstream os;
  write_spectrum_csv(os, kl);
  CHECK(os.str().rfind("k,lambda,cumulative_fraction\n", 0) == 0);
}

TEST_CASE("long correlation length leaves one dominant mode") {
  const auto x = line_nodes(64);
  const std::vector<double> w(64, 1.0 / 64);
  const auto k100 = kl_decompose({1.0, 100.0}, x, w, FixedModes{2});
  CHECK(k100.eigenvalues[0] == doctest::Approx(0.9999833377909527).epsilon(1e-9));
  // The second eigenvalue scales like 1/(6 l^2): about 1.67e-5 at l = 100.
  CHECK(k100.eigenvalues[1] / k100.eigenvalues[0] == doctest::Approx(1.6662e-5).epsilon(1e-3));
  const auto k1000 = kl_decompose({1.0, 1000.0}, x, w, FixedModes{2});
  CHECK(k1000.eigenvalues[1] / k1000.eigenvalues[0] < 1e-6);
}

TEST_CASE("five-mode truncation of the short-correlation initial field") {
  const auto x = line_nodes(512);
  const std::vector<double> w(512, 1.0 / 512);
  const auto kl = kl_decompose({1e-3, 0.01}, x, w, FixedModes{5});
  CHECK(kl.energy_fraction == doctest::Approx(0.08838662804692192).epsilon(1e-9));
}

TEST_CASE("mode sign convention") {
  const auto x = line_nodes(40);
  const std::vector<double> w(40, 1.0 / 40);
  const auto kl = kl_decompose({1.0, 0.3}, x, w, FixedModes{6});
  for (const auto &m : kl.modes) {
    double peak = 0.0;
    for (double v : m) peak = std::max(peak, std::abs(v));
    for (double v : m)
      if (std::abs(v) > 1e-8 * peak) {
        CHECK(v > 0.0);
        break;
      }
  }
}

TEST_CASE("unreachable energy target is a configuration error") {
  const auto x = line_nodes(16);
  const std::vector<double> w(16, 1.0 / 16);
  CHECK_THROWS_AS(kl_decompose({1.0, 0.1}, x, w, EnergyTarget{1.5}), ConfigError);
  CHECK_THROWS_AS(kl_decompose({1.0, 0.1}, x, w, FixedModes{17}), ConfigError);
}

TEST_CASE("property: realisation is affine in the germ") {
  const auto x = line_nodes(20);
  const std::vector<double> w(20, 1.0 / 20);
  std::vector<double> mean(20);
  for (std::size_t i = 0; i < 20; ++i) mean[i] = std::sin(x[i].x);
  const auto kl = kl_decompose({0.5, 0.2}, x, w, FixedModes{3}, mean);
  const std::vector<double> z{0.0, 0.0, 0.0}, a{1.0, -0.5, 2.0}, b{-0.3, 0.7, 0.1}, ab{0.7, 0.2, 2.1};
  const auto f0 = kl_realize(kl, z), fa = kl_realize(kl, a), fb = kl_realize(kl, b), fab = kl_realize(kl, ab);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(f0[i] == doctest::Approx(mean[i]));
    CHECK(fab[i] - f0[i] == doctest::Approx((fa[i] - f0[i]) + (fb[i] - f0[i])).scale(1.0));
  }
  CHECK_THROWS_AS(kl_realize(kl, std::vector<double>{1.0}), ContractViolation);
}

TEST_CASE("sampled KL field reproduces the truncated variance") {
  const auto x = line_nodes(24);
  const std::vector<double> w(24, 1.0 / 24);
  const auto kl = kl_decompose({0.5, 0.2}, x, w, FixedModes{4});
  std::vector<double> s2(24, 0.0), xi(4);
  const int n = 20000;
  for (int s = 0; s < n; ++s) {
    CounterStream st(77, static_cast<std::uint64_t>(s));
    for (auto &v : xi) v = st.normal();
    const auto f = kl_realize(kl, xi);
    for (std::size_t i = 0; i < 24; ++i) s2[i] += f[i] * f[i] / n;
  }
  for (std::size_t i = 0; i < 24; ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < 4; ++k) v += kl.eigenvalues[k] * kl.modes[k][i] * kl.modes[k][i];
    CHECK(s2[i] == doctest::Approx(v).epsilon(0.05));
  }
}

TEST_CASE("separable lattice decomposition equals the dense one") {
  const std::size_t n = 11;
  const double dx = 0.1;
  std::vector<double> ax(n);
  for (std::size_t i = 0; i < n; ++i) ax[i] = i * dx;
  const auto aw = lattice_weights(1, n, dx, true);
  const auto w2 = lattice_weights(2, n, dx, true);
  const auto nodes = square_nodes(n, dx);
  const CovarianceKernel k{1e-4, 0.2};
  const auto dense = kl_decompose(k, nodes, w2, FixedModes{6});
  const auto sep = kl_decompose_lattice(k, ax, aw, FixedModes{6});
  for (std::size_t m = 0; m < 6; ++m) CHECK(sep.eigenvalues[m] == doctest::Approx(dense.eigenvalues[m]).epsilon(1e-9));
  // Check the leading mode (simple eigenvalue) pointwise; later modes may be degenerate.
  for (std::size_t i = 0; i < nodes.size(); ++i)
    CHECK(sep.modes[0][i] == doctest::Approx(dense.modes[0][i]).epsilon(1e-8).scale(1.0));
  // Degenerate pairs span the same subspace: compare projectors on the first six modes.
  for (std::size_t i = 0; i < nodes.size(); i += 13)
    for (std::size_t j = 0; j < nodes.size(); j += 17) {
      double a = 0.0, b = 0.0;
      for (std::size_t m = 0; m < 6; ++m) {
        a += dense.eigenvalues[m] * dense.modes[m][i] * dense.modes[m][j];
        b += sep.eigenvalues[m] * sep.modes[m][i] * sep.modes[m][j];
      }
      CHECK(a == doctest::Approx(b).epsilon(1e-8).scale(1e-4));
    }
  double tr = 0.0;
  for (double l : sep.spectrum) tr += l;
  CHECK(tr == doctest::Approx(1e-4).epsilon(1e-8));
}

TEST_CASE("lattice weights") {
  const auto w = lattice_weights(1, 5, 0.25, true);
  CHECK(w[0] == doctest::Approx(0.125));
  CHECK(w[2] == doctest::Approx(0.25));
  CHECK(w[4] == doctest::Approx(0.125));
  const auto w2 = lattice_weights(2, 5, 0.25, true);
  CHECK(w2[0] == doctest::Approx(0.125 * 0.125));
  CHECK(w2[1] == doctest::Approx(0.125 * 0.25));
  CHECK(w2[6] == doctest::Approx(0.0625));
  double s = 0.0;
  for (double v : w2) s += v;
  CHECK(s == doctest::Approx(1.0));
  const auto wp = lattice_weights(1, 4, 0.25, false);
  for (double v : wp) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("Fourier field evaluation") {
  const std::vector<Vec2> nodes{{0.0, 0.0}, {0.25, 0.5}, {0.1, 0.7}};
  FourierCoefficients c(4);
  c.b_at(0, 0) = 1.0;
  const auto w = fourier_random_field(nodes, c, false);
  for (double v : w) CHECK(v == doctest::Approx(1.0));
  FourierCoefficients d(2);
  d.a_at(1, -1) = 0.5;
  d.b_at(0, 2) = -2.0;
  const FourierTable t(nodes, 2);
  const auto f = t.evaluate(d, false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i].x, y = nodes[i].y, tp = 2 * std::numbers::pi;
    CHECK(f[i] == doctest::Approx(0.5 * std::sin(tp * (x - y)) - 2.0 * std::cos(tp * 2 * y)).scale(1.0));
  }
}

TEST_CASE("property: normalised Fourier field peaks at two") {
  const auto nodes = square_nodes(17, 1.0 / 16);
  const FourierTable t(nodes, 4);
  for (std::uint64_t s = 0; s < 20; ++s) {
    CounterStream st(5, s);
    const auto c = sample_fourier_coefficients(st);
    const auto f = t.evaluate(c, true);
    double peak = 0.0;
    for (double v : f) peak = std::max(peak, std::abs(v));
    CHECK(peak == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(t.evaluate(FourierCoefficients(4), true), DomainError);
}

TEST_CASE("raw Fourier field has zero mean and the summed coefficient variance") {
  // Unnormalised w at a node is a sum of 2(2K+1)^2 unit-variance terms with
  // sin^2 + cos^2 = 1 per mode, so Var w = (2K+1)^2 = 81.
  const std::vector<Vec2> nodes{{0.3, 0.6}};
  const FourierTable t(nodes, 4);
  double m = 0.0, v = 0.0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    CounterStream st(9, static_cast<std::uint64_t>(s));
    const double f = t.evaluate(sample_fourier_coefficients(st), false)[0];
    m += f / n;
    v += f * f / n;
  }
  const double se = std::sqrt(81.0 / n);
  CHECK(std::abs(m) < 3 * se);
  CHECK(v == doctest::Approx(81.0).epsilon(0.05));
}

TEST_CASE("snapshot Fourier KL agrees with the direct covariance route") {
  // Few nodes, draws above and below the node count; both must give the
  // same leading spectrum when the same draws are used.
  const auto nodes = square_nodes(5, 0.25);
  const auto w = lattice_weights(2, 5, 0.25, true);
  const auto few = fourier_empirical_kl(nodes, w, 20, 3, FixedModes{4});
  // Direct empirical covariance built here from the same streams.
  const FourierTable t(nodes, 4);
  const std::size_t n = nodes.size();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::vector<double>> draws;
  std::vector<double> mean(n, 0.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    CounterStream st(3, s);
    draws.push_back(t.evaluate(sample_fourier_coefficients(st), true));
    for (std::size_t i = 0; i < n; ++i) mean[i] += draws.back()[i] / 20.0;
  }
  for (const auto &d : draws)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cov(i, j) += (d[i] - mean[i]) * (d[j] - mean[j]) / 19.0;
  const auto ref = kl_decompose_matrix(cov, w, FixedModes{4}, mean, cov.trace());
  for (std::size_t k = 0; k < 4; ++k) CHECK(few.eigenvalues[k] == doctest::Approx(ref.eigenvalues[k]).epsilon(1e-8));
  for (std::size_t i = 0; i < n; ++i) CHECK(few.mean[i] == doctest::Approx(mean[i]).scale(1.0));
}

}  // TEST_SUITE
