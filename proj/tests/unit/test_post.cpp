#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ssph/common/error.hpp"
#include "ssph/mc/campaign.hpp"
#include "ssph/post/moments.hpp"
#include "ssph/post/report.hpp"

using namespace ssph;
using namespace ssph::post;

namespace {

MomentField field(int dim, int comps, std::size_t nodes, std::size_t outputs, unsigned seed) {
  MomentField f;
  f.dim = dim;
  f.components = comps;
  f.spec_hash = "00112233aabbccdd";
  for (std::size_t j = 0; j < nodes; ++j) f.positions.push_back({0.1 * j, dim == 2 ? 0.05 * j : 0.0});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (std::size_t o = 0; o < outputs; ++o) {
    std::vector<double> m(nodes * comps), s(nodes * comps);
    for (auto &v : m) v = g(rng);
    for (auto &v : s) v = std::abs(g(rng));
    f.append(0.01 * o, 2 * o, m, s);
  }
  return f;
}

galerkin::StochasticProblem small_advection() {
  galerkin::StochasticProblem p;
  p.op = galerkin::OperatorKind::Advection1D;
  p.lattice = {1, 32, sph::Topology::Periodic, 1.2, 2.0};
  p.speed = {galerkin::Distribution::Gaussian, 0.5, 0.2};
  p.ic.fn = [](const Vec2 &x) { return std::sin(2 * std::numbers::pi * x.x); };
  p.dt = 2e-3;
  p.t_end = 0.1;
  return p;
}

}  // namespace

TEST_SUITE("post") {

TEST_CASE("moments from chaos rows") {
  // rows x n with n = 3 total particles, 2 real.
  const std::vector<double> rows{1.0, 2.0, 9.0, 3.0, 0.0, 9.0, 4.0, 1.0, 9.0};
  std::vector<double> mean, sd;
  moments_from_rows(rows, 3, 3, 2, mean, sd);
  REQUIRE(mean.size() == 2);
  CHECK(mean[0] == 1.0);
  CHECK(mean[1] == 2.0);
  CHECK(sd[0] == doctest::Approx(5.0));
  CHECK(sd[1] == doctest::Approx(1.0));
}

TEST_CASE("property: relative L2 equals the brute-force norm") {
  const auto a = field(1, 1, 17, 9, 1), b = field(1, 1, 17, 9, 2);
  for (const std::size_t min_step : {std::size_t{0}, std::size_t{5}}) {
    double num = 0.0, den = 0.0;
    for (std::size_t o = 0; o < a.outputs(); ++o) {
      if (a.steps[o] < min_step) continue;
      for (std::size_t j = 0; j < a.nodes(); ++j) {
        num += std::pow(a.stddev[a.index(o, 0, j)] - b.stddev[b.index(o, 0, j)], 2);
        den += std::pow(b.stddev[b.index(o, 0, j)], 2);
      }
    }
    const auto e = relative_l2(a, b, Moment::Std, min_step);
    CHECK_FALSE(e.absolute);
    CHECK(e.value == doctest::Approx(std::sqrt(num / den)).epsilon(1e-13));
  }
  CHECK(relative_l2(a, a, Moment::Mean).value == 0.0);
}

TEST_CASE("relative L2 with a vanishing reference reports the absolute norm") {
  auto a = field(1, 1, 4, 2, 3);
  auto b = a;
  std::fill(b.mean.begin(), b.mean.end(), 0.0);
  double n = 0.0;
  for (double v : a.mean) n += v * v;
  const auto e = relative_l2(a, b, Moment::Mean);
  CHECK(e.absolute);
  CHECK(e.value == doctest::Approx(std::sqrt(n)));
}

TEST_CASE("relative L2 rejects mismatched grids") {
  const auto a = field(1, 1, 5, 3, 1);
  CHECK_THROWS_AS(relative_l2(a, field(1, 1, 6, 3, 1), Moment::Mean), ContractViolation);
  CHECK_THROWS_AS(relative_l2(a, field(1, 1, 5, 4, 1), Moment::Mean), ContractViolation);
  auto moved = a;
  moved.positions[2].x += 0.5;
  CHECK_THROWS_AS(relative_l2(a, moved, Moment::Mean), ContractViolation);
}

TEST_CASE("moment CSV round trip") {
  for (const auto &[dim, comps] : {std::pair{1, 1}, std::pair{2, 2}}) {
    auto f = field(dim, comps, 6, 3, 7);
    f.source = Source::MCS;
    std::stringstream ss;
    write_moments_csv(ss, f);
    const std::string text = ss.str();
    CHECK(text.find("# spec_hash=00112233aabbccdd") != std::string::npos);
    if (dim == 1) CHECK(text.find("t,x,mean,std\n") != std::string::npos);
    else CHECK(text.find("t,x,y,mean_u,std_u,mean_v,std_v\n") != std::string::npos);
    const auto g = read_moments_csv(ss);
    CHECK(g.spec_hash == f.spec_hash);
    CHECK(g.source == Source::MCS);
    CHECK(g.dim == dim);
    CHECK(g.components == comps);
    CHECK(g.steps == f.steps);
    CHECK(g.times == f.times);
    CHECK(g.mean == f.mean);
    CHECK(g.stddev == f.stddev);
    for (std::size_t j = 0; j < f.nodes(); ++j) {
      CHECK(g.positions[j].x == f.positions[j].x);
      CHECK(g.positions[j].y == f.positions[j].y);
    }
  }
  std::istringstream bad("t,x,mean,std\n0,abc,1,2\n");
  CHECK_THROWS_AS(read_moments_csv(bad), ConfigError);
}

TEST_CASE("convergence rows come out sorted and unique") {
  const auto p = small_advection();
  mc::CampaignConfig cfg;
  cfg.samples = 200;
  const auto base = mc::run_campaign(p, cfg);
  const auto rep = convergence_study(p, {}, {3, 1, 2, 1}, base.moments);
  REQUIRE(rep.rows.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(rep.rows[k].order == k + 1);
  for (const auto &r : rep.rows) {
    CHECK(r.err_mean >= 0.0);
    CHECK(r.seconds >= 0.0);
  }
  std::ostringstream os;
  write_error_csv(os, rep);
  CHECK(os.str().rfind("q,err_mean,err_std,seconds\n", 0) == 0);
}

TEST_CASE("speedup ratio and timing report") {
  const auto s = speedup_report(0.5, 5, 40.0, 5000);
  CHECK(s.ratio == doctest::Approx(80.0));
  std::ostringstream os;
  write_timing(os, s);
  CHECK(os.str().find("speedup = 80") != std::string::npos);
  CHECK(os.str().find("samples = 5000") != std::string::npos);
}

TEST_CASE("probe slices only at shared output times") {
  const auto a = field(1, 1, 11, 5, 1), b = field(1, 1, 11, 5, 2);
  std::ostringstream os;
  write_probes_csv(os, a, b, {0.3}, {0.02, 0.025});
  const std::string text = os.str();
  CHECK(text.rfind("kind,coord,t_or_x,ssph_val,mcs_val,which_moment\n", 0) == 0);
  std::size_t spatial = 0, temporal = 0;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.rfind("spatial", 0) == 0) ++spatial;
    if (line.rfind("temporal", 0) == 0) ++temporal;
  }
  // One matching time (0.02) x 11 nodes x 2 moments; one probe x 5 outputs x 2 moments.
  CHECK(spatial == 22);
  CHECK(temporal == 10);
}

TEST_CASE("S-SPH run collects output levels") {
  const auto r = run_ssph(small_advection(), {.order = 2, .output_stride = 10});
  CHECK(r.rows == 3);
  CHECK(r.moments.source == Source::SSPH);
  CHECK(r.moments.steps == std::vector<std::size_t>{0, 10, 20, 30, 40, 50});
  CHECK(r.seconds > 0.0);
}

}  // TEST_SUITE
