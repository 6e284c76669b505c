#include "ssph/bench/spec.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <variant>

#include "ssph/common/error.hpp"
#include "ssph/fields/fourier.hpp"
#include "ssph/fields/karhunen_loeve.hpp"

namespace ssph::bench {

namespace {

using Slot = std::variant<double *, int *, bool *, std::string *, std::uint64_t *>;

struct Field {
  const char *section;
  const char *key;
  Slot slot;
};

std::vector<Field> fields_of(BenchmarkSpec &s) {
  return {
      {"benchmark", "id", &s.id},
      {"benchmark", "operator", &s.op},
      {"grid", "cells", &s.cells},
      {"grid", "topology", &s.topology},
      {"grid", "h_factor", &s.h_factor},
      {"grid", "radius_factor", &s.radius_factor},
      {"grid", "kernel", &s.kernel},
      {"time", "dt", &s.dt},
      {"time", "t_end", &s.t_end},
      {"speed", "law", &s.speed_law},
      {"speed", "mean", &s.speed_mean},
      {"speed", "std", &s.speed_std},
      {"ic", "kind", &s.ic},
      {"ic", "amplitude", &s.ic_amplitude},
      {"ic", "alpha_law", &s.alpha_law},
      {"ic", "alpha_mean", &s.alpha_mean},
      {"ic", "alpha_std", &s.alpha_std},
      {"ic", "beta_law", &s.beta_law},
      {"ic", "beta_mean", &s.beta_mean},
      {"ic", "beta_std", &s.beta_std},
      {"ic", "grf_mean_amplitude", &s.grf_mean_amplitude},
      {"ic", "grf_variance", &s.grf_variance},
      {"ic", "grf_length", &s.grf_length},
      {"ic", "grf_modes", &s.grf_modes},
      {"ic", "fourier_max_mode", &s.fourier_max_mode},
      {"ic", "fourier_draws", &s.fourier_draws},
      {"ic", "fourier_seed", &s.fourier_seed},
      {"ic", "fourier_kl_modes", &s.fourier_kl_modes},
      {"viscosity", "mean", &s.viscosity_mean},
      {"viscosity", "random", &s.viscosity_random},
      {"viscosity", "variance", &s.viscosity_variance},
      {"viscosity", "length", &s.viscosity_length},
      {"viscosity", "modes", &s.viscosity_modes},
      {"operator", "advection_form", &s.advection_form},
      {"operator", "advection", &s.advection},
      {"chaos", "order", &s.order},
      {"solver", "stepper", &s.stepper},
      {"solver", "corrected", &s.corrected},
      {"solver", "cfl_guard", &s.cfl_guard},
      {"solver", "output_stride", &s.output_stride},
      {"mc", "samples", &s.samples},
      {"mc", "seed", &s.seed},
      {"mc", "block", &s.block},
      {"tolerance", "mean", &s.tol_mean},
      {"tolerance", "std", &s.tol_std},
      {"meta", "assumptions", &s.assumptions},
  };
}

std::string format(const Slot &slot) {
  struct {
    std::string operator()(double *v) const {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *v);
      return buf;
    }
    std::string operator()(int *v) const { return std::to_string(*v); }
    std::string operator()(bool *v) const { return *v ? "true" : "false"; }
    std::string operator()(std::string *v) const { return *v; }
    std::string operator()(std::uint64_t *v) const { return std::to_string(*v); }
  } visitor;
  return std::visit(visitor, slot);
}

void parse(const Slot &slot, const std::string &text, const std::string &name) {
  auto bad = [&](const char *what) { throw ConfigError(name + ": " + what + " (got '" + text + "')"); };
  try {
    std::size_t used = 0;
    if (auto *d = std::get_if<double *>(&slot)) {
      **d = std::stod(text, &used);
    } else if (auto *i = std::get_if<int *>(&slot)) {
      **i = std::stoi(text, &used);
    } else if (auto *u = std::get_if<std::uint64_t *>(&slot)) {
      if (!text.empty() && text[0] == '-') bad("expected an unsigned integer");
      **u = std::stoull(text, &used);
    } else if (auto *b = std::get_if<bool *>(&slot)) {
      if (text == "true") **b = true;
      else if (text == "false") **b = false;
      else bad("expected true or false");
      used = text.size();
    } else {
      *std::get<std::string *>(slot) = text;
      used = text.size();
    }
    if (used != text.size()) bad("trailing characters");
  } catch (const std::invalid_argument &) {
    bad("malformed value");
  } catch (const std::out_of_range &) {
    bad("value out of range");
  }
}

}  // namespace

void write_spec(std::ostream &os, const BenchmarkSpec &spec) {
  BenchmarkSpec copy = spec;
  std::string section;
  for (const auto &f : fields_of(copy)) {
    if (section != f.section) {
      if (!section.empty()) os << '\n';
      section = f.section;
      os << '[' << section << "]\n";
    }
    os << f.key << " = " << format(f.slot) << '\n';
  }
}

std::string dump_spec(const BenchmarkSpec &spec) {
  std::ostringstream os;
  write_spec(os, spec);
  return os.str();
}

BenchmarkSpec read_spec(std::istream &is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError(std::string("config syntax: ") + e.message() + " at line " +
                      std::to_string(e.line()));
  }
  BenchmarkSpec spec;
  auto table = fields_of(spec);
  for (const auto &[section, keys] : tree) {
    if (keys.empty() && !keys.data().empty())
      throw ConfigError("key '" + section + "' must appear inside a section");
    for (const auto &[key, value] : keys) {
      const std::string name = section + "." + key;
      const Field *match = nullptr;
      for (const auto &f : table)
        if (section == f.section && key == f.key) match = &f;
      if (!match) throw ConfigError(name + ": unknown key");
      parse(match->slot, value.data(), name);
    }
  }
  return spec;
}

BenchmarkSpec load_spec(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return read_spec(in);
}

bool operator==(const BenchmarkSpec &a, const BenchmarkSpec &b) { return dump_spec(a) == dump_spec(b); }

std::string spec_hash(const BenchmarkSpec &spec) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : dump_spec(spec)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> preset_names() {
  return {"example1-gaussian",         "example1-lognormal",
          "example1-random-sine",      "example1-grf",
          "example2-random-sine",      "example2-grf",
          "example3-fourier",          "example3-random-viscosity",
          "example1-gaussian-desk",    "example1-lognormal-desk",
          "example2-random-sine-desk", "example3-fourier-desk",
          "example3-random-viscosity-desk"};
}

BenchmarkSpec preset(const std::string &name) {
  BenchmarkSpec s;
  s.id = name;
  const std::string ic_note = "ic sin(2 pi x) assumed for the random-speed cases";
  auto example1 = [&]() {
    s.op = "advection1d";
    s.assumptions = ic_note;
  };
  auto example2 = [&]() {
    s.op = "burgers1d";
    s.speed_law = "constant";
    s.speed_mean = 0.0;
    s.speed_std = 0.0;
    s.dt = 5e-4;
    s.t_end = 0.2;
    s.tol_std = 0.20;
    s.assumptions =
        "grid, order and sample count reused from the advection benchmark; dt halved for the CFL "
        "guard; t_end kept below the sampled wave-breaking estimate";
  };
  auto example3 = [&]() {
    s.op = "burgers2d";
    s.cells = 128;
    s.topology = "dirichlet";
    s.h_factor = 1.6;
    s.speed_law = "constant";
    s.speed_mean = 0.0;
    s.speed_std = 0.0;
    s.order = 3;
    s.dt = 1e-3;
    s.t_end = 0.5;
    s.tol_mean = 0.10;
    s.tol_std = 0.30;
    s.ic_amplitude = 1.0;
  };
  auto desk3 = [&]() {
    s.cells = 48;
    s.order = 2;
    s.samples = 200;
    s.t_end = 0.1;
  };

  if (name == "example1-gaussian") {
    example1();
  } else if (name == "example1-lognormal") {
    example1();
    s.speed_law = "lognormal";
  } else if (name == "example1-random-sine") {
    example1();
    s.ic = "random_sine";
    s.assumptions = "advection speed kept random alongside the random initial condition";
  } else if (name == "example1-grf") {
    example1();
    s.ic = "grf";
    s.assumptions = "advection speed kept random alongside the random initial condition";
  } else if (name == "example2-random-sine") {
    example2();
    s.ic = "random_sine";
  } else if (name == "example2-grf") {
    example2();
    s.ic = "grf";
    s.t_end = 0.5;
  } else if (name == "example3-fourier") {
    example3();
    s.ic = "fourier";
    s.dt = 5e-4;
    s.assumptions = "Fourier initial field compressed to 4 KL modes of its sample covariance; dt "
                    "halved for the CFL guard";
  } else if (name == "example3-random-viscosity") {
    example3();
    s.ic = "sine2d";
    s.viscosity_random = true;
    s.dt = 5e-4;
    s.assumptions =
        "ic u0 = v0 = sin(2 pi x) sin(2 pi y); viscosity covariance variance 1e-4 length 0.2, 4 "
        "modes; dt halved for the CFL guard";
  } else if (name == "example1-gaussian-desk") {
    example1();
    s.cells = 256;
    s.dt = 2e-3;
    s.samples = 2000;
  } else if (name == "example1-lognormal-desk") {
    example1();
    s.speed_law = "lognormal";
    s.cells = 256;
    s.dt = 2e-3;
    s.samples = 2000;
  } else if (name == "example2-random-sine-desk") {
    example2();
    s.ic = "random_sine";
    s.cells = 256;
    s.dt = 1e-3;
    s.order = 4;
    s.samples = 2000;
  } else if (name == "example3-fourier-desk") {
    example3();
    desk3();
    s.ic = "fourier";
    s.assumptions = "Fourier initial field compressed to 4 KL modes of its sample covariance";
  } else if (name == "example3-random-viscosity-desk") {
    example3();
    desk3();
    s.ic = "sine2d";
    s.viscosity_random = true;
    s.assumptions =
        "ic u0 = v0 = sin(2 pi x) sin(2 pi y); viscosity covariance variance 1e-4 length 0.2, 4 "
        "modes";
  } else {
    std::string known;
    for (const auto &n : preset_names()) known += " " + n;
    throw ConfigError("unknown benchmark '" + name + "'; known:" + known);
  }
  return s;
}

namespace {

void require(bool ok, const std::string &key, const std::string &what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

bool one_of(const std::string &v, std::initializer_list<const char *> options) {
  for (const char *o : options)
    if (v == o) return true;
  return false;
}

galerkin::Distribution law_of(const std::string &s) {
  if (s == "constant") return galerkin::Distribution::Constant;
  if (s == "gaussian") return galerkin::Distribution::Gaussian;
  return galerkin::Distribution::Lognormal;
}

int dim_of(const BenchmarkSpec &s) { return s.op == "burgers2d" ? 2 : 1; }

}  // namespace

void validate(const BenchmarkSpec &s) {
  require(one_of(s.op, {"advection1d", "burgers1d", "burgers2d"}), "benchmark.operator",
          "must be advection1d, burgers1d or burgers2d");
  require(s.cells >= 4, "grid.cells", "must be >= 4");
  require(one_of(s.topology, {"periodic", "dirichlet"}), "grid.topology", "must be periodic or dirichlet");
  require(s.h_factor > 0.0, "grid.h_factor", "must be positive");
  require(s.radius_factor > 0.0, "grid.radius_factor", "must be positive");
  require(one_of(s.kernel, {"cubic", "gaussian"}), "grid.kernel", "must be cubic or gaussian");
  require(s.dt > 0.0 && std::isfinite(s.dt), "time.dt", "must be positive");
  require(s.t_end > 0.0 && std::isfinite(s.t_end), "time.t_end", "must be positive");
  const double steps = std::round(s.t_end / s.dt);
  require(std::abs(steps * s.dt - s.t_end) <= 1e-9 * s.t_end, "time.t_end",
          "must be an integer multiple of time.dt");
  for (const auto &[key, law] : {std::pair{"speed.law", s.speed_law}, std::pair{"ic.alpha_law", s.alpha_law},
                                 std::pair{"ic.beta_law", s.beta_law}})
    require(one_of(law, {"constant", "gaussian", "lognormal"}), key,
            "must be constant, gaussian or lognormal");
  require(s.speed_std >= 0.0, "speed.std", "must be >= 0");
  require(s.alpha_std >= 0.0, "ic.alpha_std", "must be >= 0");
  require(s.beta_std >= 0.0, "ic.beta_std", "must be >= 0");
  if (s.speed_law == "lognormal") require(s.speed_mean > 0.0, "speed.mean", "lognormal needs mean > 0");
  if (s.alpha_law == "lognormal") require(s.alpha_mean > 0.0, "ic.alpha_mean", "lognormal needs mean > 0");
  if (s.beta_law == "lognormal") require(s.beta_mean > 0.0, "ic.beta_mean", "lognormal needs mean > 0");

  const int dim = dim_of(s);
  if (dim == 1)
    require(one_of(s.ic, {"sine", "random_sine", "grf"}), "ic.kind",
            "must be sine, random_sine or grf for one-dimensional operators");
  else
    require(one_of(s.ic, {"sine2d", "fourier"}), "ic.kind",
            "must be sine2d or fourier for burgers2d");
  require(s.grf_variance >= 0.0, "ic.grf_variance", "must be >= 0");
  require(s.grf_length > 0.0, "ic.grf_length", "must be positive");
  require(s.grf_modes >= 1 && s.grf_modes <= s.cells, "ic.grf_modes", "must be in [1, cells]");
  require(s.fourier_max_mode >= 0, "ic.fourier_max_mode", "must be >= 0");
  require(s.fourier_draws >= 2, "ic.fourier_draws", "must be >= 2");
  require(s.fourier_kl_modes >= 1 && s.fourier_kl_modes <= s.fourier_draws, "ic.fourier_kl_modes",
          "must be in [1, fourier_draws]");
  require(s.viscosity_mean >= 0.0, "viscosity.mean", "must be >= 0");
  require(s.viscosity_variance >= 0.0, "viscosity.variance", "must be >= 0");
  require(s.viscosity_length > 0.0, "viscosity.length", "must be positive");
  require(s.viscosity_modes >= 1, "viscosity.modes", "must be >= 1");
  require(one_of(s.advection_form, {"verbatim", "standard"}), "operator.advection_form",
          "must be verbatim or standard");
  require(s.order >= 0 && s.order <= 30, "chaos.order", "must be in [0, 30]");
  require(one_of(s.stepper, {"eulerian", "lagrangian"}), "solver.stepper",
          "must be eulerian or lagrangian");
  require(s.cfl_guard >= 0.0, "solver.cfl_guard", "must be >= 0");
  require(s.output_stride >= 1, "solver.output_stride", "must be >= 1");
  require(s.samples >= 2, "mc.samples", "must be >= 2");
  require(s.block >= 1, "mc.block", "must be >= 1");
  require(s.tol_mean > 0.0, "tolerance.mean", "must be positive");
  require(s.tol_std > 0.0, "tolerance.std", "must be positive");
  if (s.op == "burgers2d") require(s.topology == "dirichlet", "grid.topology", "burgers2d uses dirichlet walls");
  if (s.op != "burgers2d") require(s.topology == "periodic", "grid.topology", "1D benchmarks are periodic");

  if (s.op == "burgers1d") {
    const double t_break = breaking_time_estimate(s);
    if (s.t_end > t_break) {
      std::ostringstream msg;
      msg << "exceeds the wave-breaking estimate " << t_break;
      throw ConfigError("time.t_end: " + msg.str());
    }
  }
}

namespace {

std::vector<double> axis_nodes(int count, double dx) {
  std::vector<double> x(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) x[static_cast<std::size_t>(i)] = i * dx;
  return x;
}

galerkin::StochasticProblem assemble(const BenchmarkSpec &s) {
  using namespace galerkin;
  StochasticProblem p;
  p.op = s.op == "advection1d" ? OperatorKind::Advection1D
         : s.op == "burgers1d" ? OperatorKind::Burgers1D
                               : OperatorKind::Burgers2D;
  const int dim = dim_of(s);
  p.lattice = {dim, s.cells,
               s.topology == "dirichlet" ? sph::Topology::DirichletGhost : sph::Topology::Periodic,
               s.h_factor, s.radius_factor};
  p.kernel = s.kernel == "gaussian" ? sph::KernelFamily::Gaussian : sph::KernelFamily::CubicSpline;
  p.speed = {law_of(s.speed_law), s.speed_mean, s.speed_std};
  p.dt = s.dt;
  p.t_end = s.t_end;
  p.form = s.advection_form == "standard" ? AdvectionForm::Standard : AdvectionForm::Verbatim;
  p.advection_enabled = s.advection;
  p.viscosity.mean = s.viscosity_mean;

  const double dx = 1.0 / s.cells;
  const bool closed = s.topology == "dirichlet";
  const int per_axis = closed ? s.cells + 1 : s.cells;
  const auto ax = axis_nodes(per_axis, dx);
  const auto ax_w = fields::lattice_weights(1, static_cast<std::size_t>(per_axis), dx, closed);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double amp = s.ic_amplitude;

  if (s.ic == "sine") {
    p.ic.fn = [amp](const Vec2 &x) { return amp * std::sin(two_pi * x.x); };
  } else if (s.ic == "sine2d") {
    p.ic.fn = [amp](const Vec2 &x) { return amp * std::sin(two_pi * x.x) * std::sin(two_pi * x.y); };
  } else if (s.ic == "random_sine") {
    p.ic.kind = InitialCondition::Kind::RandomSine;
    p.ic.alpha = {law_of(s.alpha_law), s.alpha_mean, s.alpha_std};
    p.ic.beta = {law_of(s.beta_law), s.beta_mean, s.beta_std};
  } else if (s.ic == "grf") {
    std::vector<Vec2> nodes;
    std::vector<double> mean;
    for (const double x : ax) {
      nodes.push_back({x, 0.0});
      mean.push_back(s.grf_mean_amplitude * std::sin(two_pi * x));
    }
    p.ic.kind = InitialCondition::Kind::KL;
    p.ic.kl = std::make_shared<fields::KLExpansion>(fields::kl_decompose(
        {s.grf_variance, s.grf_length}, nodes, ax_w,
        fields::FixedModes{static_cast<std::size_t>(s.grf_modes)}, mean));
  } else if (s.ic == "fourier") {
    std::vector<Vec2> nodes;
    for (const double y : ax)
      for (const double x : ax) nodes.push_back({x, y});
    const auto w = fields::lattice_weights(2, static_cast<std::size_t>(per_axis), dx, closed);
    p.ic.kind = InitialCondition::Kind::KL;
    p.ic.kl = std::make_shared<fields::KLExpansion>(fields::fourier_empirical_kl(
        nodes, w, static_cast<std::size_t>(s.fourier_draws), s.fourier_seed,
        fields::FixedModes{static_cast<std::size_t>(s.fourier_kl_modes)}, s.fourier_max_mode));
  }

  if (s.viscosity_random && p.op == OperatorKind::Burgers2D) {
    std::vector<double> mean(ax.size() * ax.size(), s.viscosity_mean);
    p.viscosity.kl = std::make_shared<fields::KLExpansion>(fields::kl_decompose_lattice(
        {s.viscosity_variance, s.viscosity_length}, ax, ax_w,
        fields::FixedModes{static_cast<std::size_t>(s.viscosity_modes)}, mean));
  }
  return p;
}

}  // namespace

double breaking_time_estimate(const BenchmarkSpec &spec, int samples) {
  const auto problem = assemble(spec);
  const int dims = galerkin::germ_layout(problem).total();
  const auto lattice = sph::make_lattice(problem.lattice);
  const std::size_t n = lattice.real_count();
  const double dx = 1.0 / spec.cells;
  double best = std::numeric_limits<double>::infinity();
  const int count = dims == 0 ? 1 : samples;
  for (int k = 0; k < count; ++k) {
    // Streams far above any campaign index keep these draws separate.
    const auto xi = mc::draw_germ(spec.seed, (1ULL << 40) + static_cast<std::uint64_t>(k), dims);
    const auto d = mc::realize(problem, xi);
    std::vector<double> u(n);
    if (d.ic.kind == galerkin::InitialCondition::Kind::Field) u = d.ic.values_u;
    else
      for (std::size_t j = 0; j < n; ++j) u[j] = d.ic.fn(lattice.position(j));
    double slope = 0.0;
    // Interior slopes only: sine ICs with a random wavenumber are not
    // periodic, and the jump across the seam is not a smooth-profile slope.
    for (std::size_t j = 0; j + 1 < n; ++j) slope = std::max(slope, std::abs(u[j + 1] - u[j]) / dx);
    if (slope > 0.0) best = std::min(best, 1.0 / slope);
  }
  return best;
}

galerkin::StochasticProblem build_problem(const BenchmarkSpec &spec) {
  validate(spec);
  return assemble(spec);
}

galerkin::SolverConfig solver_config(const BenchmarkSpec &s) {
  galerkin::SolverConfig c;
  c.order = s.order;
  c.mode = s.stepper == "lagrangian" ? galerkin::StepperMode::Lagrangian : galerkin::StepperMode::Eulerian;
  c.corrected = s.corrected;
  c.cfl_guard = s.cfl_guard;
  c.output_stride = static_cast<std::size_t>(s.output_stride);
  return c;
}

mc::CampaignConfig campaign_config(const BenchmarkSpec &s) {
  mc::CampaignConfig c;
  c.samples = static_cast<std::size_t>(s.samples);
  c.seed = s.seed;
  c.block = static_cast<std::size_t>(s.block);
  c.solver = solver_config(s);
  return c;
}

}  // namespace ssph::bench
