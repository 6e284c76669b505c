#include "ssph/cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ssph/bench/spec.hpp"
#include "ssph/common/error.hpp"
#include "ssph/common/parallel.hpp"
#include "ssph/fields/karhunen_loeve.hpp"
#include "ssph/mc/campaign.hpp"
#include "ssph/post/report.hpp"

namespace ssph::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  int threads = 0;
  std::optional<int> order;
  std::optional<int> samples;
  std::string mode = "ssph";
  std::optional<std::string> stepper;
};

struct Loaded {
  bench::BenchmarkSpec spec;
  std::vector<std::string> overrides;
};

Loaded load(const Globals &g, const std::string &name) {
  Loaded l;
  if (!g.config.empty()) l.spec = bench::load_spec(g.config);
  else if (!name.empty()) l.spec = bench::preset(name);
  else throw ConfigError("name a benchmark or pass --config");
  if (g.order) {
    l.spec.order = *g.order;
    l.overrides.push_back("chaos.order=" + std::to_string(*g.order));
  }
  if (g.samples) {
    l.spec.samples = *g.samples;
    l.overrides.push_back("mc.samples=" + std::to_string(*g.samples));
  }
  if (g.seed) {
    l.spec.seed = *g.seed;
    l.overrides.push_back("mc.seed=" + std::to_string(*g.seed));
  }
  if (g.stepper) {
    l.spec.stepper = *g.stepper;
    l.overrides.push_back("solver.stepper=" + *g.stepper);
  }
  bench::validate(l.spec);
  return l;
}

std::ofstream open_out(const Globals &g, const std::string &file) {
  fs::create_directories(g.out);
  std::ofstream os(fs::path(g.out) / file);
  if (!os) throw ConfigError("cannot write " + (fs::path(g.out) / file).string());
  return os;
}

void write_metadata(const Globals &g, const Loaded &l, const std::string &method,
                    const std::vector<std::pair<std::string, std::string>> &extra) {
  auto spec_os = open_out(g, "spec.ini");
  bench::write_spec(spec_os, l.spec);
  auto os = open_out(g, "run_info.txt");
  os << "benchmark = " << l.spec.id << '\n'
     << "spec_hash = " << bench::spec_hash(l.spec) << '\n'
     << "method = " << method << '\n'
     << "threads = " << thread_count() << '\n';
  std::string joined;
  for (const auto &o : l.overrides) joined += (joined.empty() ? "" : ";") + o;
  os << "overrides = " << joined << '\n';
  os << "assumptions = " << l.spec.assumptions << '\n';
  for (const auto &[k, v] : extra) os << k << " = " << v << '\n';
}

post::MomentField read_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return post::read_moments_csv(in);
}

int cmd_run(const Globals &g, const std::string &name) {
  const auto l = load(g, name);
  const auto problem = bench::build_problem(l.spec);
  const std::string hash = bench::spec_hash(l.spec);
  if (g.mode == "ssph") {
    auto run = post::run_ssph(problem, bench::solver_config(l.spec));
    run.moments.spec_hash = hash;
    auto os = open_out(g, "ssph_moments.csv");
    post::write_moments_csv(os, run.moments);
    write_metadata(g, l, "ssph",
                   {{"order", std::to_string(l.spec.order)},
                    {"chaos_rows", std::to_string(run.rows)},
                    {"seconds", std::to_string(run.seconds)}});
    std::cout << "ssph: " << run.rows << " chaos rows, " << run.seconds << " s\n";
  } else {
    auto r = mc::run_campaign(problem, bench::campaign_config(l.spec));
    r.moments.spec_hash = hash;
    auto os = open_out(g, "mcs_moments.csv");
    post::write_moments_csv(os, r.moments);
    auto t = open_out(g, "mcs_timing.txt");
    t << "samples = " << r.samples << "\nseconds = " << r.seconds
      << "\nseconds_per_sample = " << r.seconds / static_cast<double>(r.samples) << '\n';
    write_metadata(g, l, "mcs",
                   {{"samples", std::to_string(r.samples)},
                    {"seconds", std::to_string(r.seconds)},
                    {"clamped_viscosity_nodes", std::to_string(r.clamped_nodes)}});
    std::cout << "mcs: " << r.samples << " samples, " << r.seconds << " s\n";
  }
  return kExitOk;
}

int cmd_compare(const Globals &g, const std::string &name, const std::string &ssph_file,
                const std::string &mcs_file, bool probes) {
  post::MomentField a, b;
  double tol_mean = 0.05, tol_std = 0.15;
  std::optional<post::Speedup> speed;
  int order = 0;
  std::optional<Loaded> loaded;
  if (!ssph_file.empty() || !mcs_file.empty()) {
    if (ssph_file.empty() || mcs_file.empty()) throw ConfigError("--ssph and --mcs go together");
    a = read_csv(ssph_file);
    b = read_csv(mcs_file);
    if (a.spec_hash != b.spec_hash)
      throw ConfigError("spec hash mismatch: " + a.spec_hash + " vs " + b.spec_hash);
    if (!name.empty() || !g.config.empty()) {
      loaded = load(g, name);
      tol_mean = loaded->spec.tol_mean;
      tol_std = loaded->spec.tol_std;
      if (bench::spec_hash(loaded->spec) != a.spec_hash)
        throw ConfigError("CSV files were produced by a different spec");
    }
  } else {
    loaded = load(g, name);
    const auto &spec = loaded->spec;
    tol_mean = spec.tol_mean;
    tol_std = spec.tol_std;
    order = spec.order;
    const auto problem = bench::build_problem(spec);
    auto run = post::run_ssph(problem, bench::solver_config(spec));
    auto mcs = mc::run_campaign(problem, bench::campaign_config(spec));
    a = std::move(run.moments);
    b = std::move(mcs.moments);
    a.spec_hash = b.spec_hash = bench::spec_hash(spec);
    speed = post::speedup_report(run.seconds, order, mcs.seconds, mcs.samples);
    auto sa = open_out(g, "ssph_moments.csv");
    post::write_moments_csv(sa, a);
    auto sb = open_out(g, "mcs_moments.csv");
    post::write_moments_csv(sb, b);
    auto t = open_out(g, "timing.txt");
    post::write_timing(t, *speed);
  }
  const auto em = post::relative_l2(a, b, post::Moment::Mean, post::kErrorMinStep);
  const auto es = post::relative_l2(a, b, post::Moment::Std, post::kErrorMinStep);
  post::ErrorReport report;
  report.rows.push_back({order, em.value, es.value, speed ? speed->ssph_seconds : 0.0});
  auto os = open_out(g, "error_report.csv");
  post::write_error_csv(os, report);
  if (probes) {
    auto ps = open_out(g, "probes.csv");
    post::write_probes_csv(ps, a, b, {0.30, 0.70}, {0.30, 0.50, 0.70});
  }
  if (loaded) write_metadata(g, *loaded, "compare", {{"err_mean", std::to_string(em.value)},
                                                     {"err_std", std::to_string(es.value)}});
  std::cout << "err_mean = " << em.value << (em.absolute ? " (absolute)" : "")
            << "\nerr_std = " << es.value << (es.absolute ? " (absolute)" : "") << '\n';
  if (speed) std::cout << "speedup = " << speed->ratio << '\n';
  const bool ok = em.value <= tol_mean && es.value <= tol_std;
  std::cout << (ok ? "within tolerance" : "tolerance exceeded") << " (mean <= " << tol_mean
            << ", std <= " << tol_std << ")\n";
  return ok ? kExitOk : kExitTolerance;
}

int cmd_converge(const Globals &g, const std::string &name, const std::vector<int> &orders) {
  const auto l = load(g, name);
  const auto problem = bench::build_problem(l.spec);
  const auto mcs = mc::run_campaign(problem, bench::campaign_config(l.spec));
  auto report = post::convergence_study(problem, bench::solver_config(l.spec), orders, mcs.moments);
  report.mcs_seconds = mcs.seconds;
  report.samples = mcs.samples;
  auto os = open_out(g, "errors.csv");
  post::write_error_csv(os, report);
  write_metadata(g, l, "converge", {{"samples", std::to_string(mcs.samples)},
                                    {"mcs_seconds", std::to_string(mcs.seconds)}});
  post::write_error_csv(std::cout, report);
  return kExitOk;
}

int cmd_spec_dump(const Globals &g, const std::string &name, const std::string &file) {
  const auto l = load(g, name);
  if (file.empty()) {
    bench::write_spec(std::cout, l.spec);
  } else {
    std::ofstream os(file);
    if (!os) throw ConfigError("cannot write " + file);
    bench::write_spec(os, l.spec);
  }
  return kExitOk;
}

int cmd_spec_validate(const std::string &file) {
  const auto spec = bench::load_spec(file);
  bench::validate(spec);
  std::cout << "valid: " << spec.id << " (hash " << bench::spec_hash(spec) << ")\n";
  return kExitOk;
}

int cmd_kl_inspect(const Globals &g, const std::string &name, const std::string &which) {
  const auto l = load(g, name);
  const auto problem = bench::build_problem(l.spec);
  const auto &kl = which == "viscosity" ? problem.viscosity.kl : problem.ic.kl;
  if (!kl) throw ConfigError("benchmark has no KL expansion for the " + which);
  auto os = open_out(g, which + "_kl_spectrum.csv");
  fields::write_spectrum_csv(os, *kl);
  std::cout << "modes kept " << kl->size() << ", energy fraction " << kl->energy_fraction << '\n';
  return kExitOk;
}

}  // namespace

int cli_main(int argc, char **argv) {
  CLI::App app{"Stochastic SPH solver with polynomial chaos and Monte Carlo reference"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "benchmark config file");
  app.add_option("--seed", g.seed, "Monte Carlo master seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", g.threads, "worker thread cap (default: S_SPH_THREADS or 1)");
  app.add_option("--order", g.order, "chaos order q");
  app.add_option("--samples", g.samples, "Monte Carlo sample count");
  app.add_option("--mode", g.mode, "method for run")->check(CLI::IsMember({"ssph", "mcs"}));
  app.add_option("--stepper", g.stepper, "time stepper")->check(CLI::IsMember({"eulerian", "lagrangian"}));

  std::string name, ssph_file, mcs_file, dump_file, validate_file, kl_field = "ic";
  std::string orders_text = "1,2,3,4,5";
  bool probes = false;

  auto *run = app.add_subcommand("run", "solve one benchmark with one method");
  run->add_option("benchmark", name, "preset name");
  auto *compare = app.add_subcommand("compare", "S-SPH against Monte Carlo with error report");
  compare->add_option("benchmark", name, "preset name");
  compare->add_option("--ssph", ssph_file, "existing S-SPH moments CSV");
  compare->add_option("--mcs", mcs_file, "existing Monte Carlo moments CSV");
  compare->add_flag("--probes", probes, "also write probe slices");
  auto *converge = app.add_subcommand("converge", "error against chaos order");
  converge->add_option("benchmark", name, "preset name");
  converge->add_option("--orders", orders_text, "comma-separated orders");
  auto *spec = app.add_subcommand("spec", "benchmark specifications");
  spec->require_subcommand(1);
  auto *dump = spec->add_subcommand("dump", "print a spec as a config file");
  dump->add_option("benchmark", name, "preset name");
  dump->add_option("--file", dump_file, "write to file instead of stdout");
  auto *valid = spec->add_subcommand("validate", "check a config file");
  valid->add_option("file", validate_file, "config file")->required();
  auto *kl = app.add_subcommand("kl", "Karhunen-Loeve tools");
  kl->require_subcommand(1);
  auto *inspect = kl->add_subcommand("inspect", "write the KL spectrum CSV");
  inspect->add_option("benchmark", name, "preset name");
  inspect->add_option("--field", kl_field, "ic or viscosity")->check(CLI::IsMember({"ic", "viscosity"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }

  int threads = g.threads;
  if (threads <= 0)
    if (const char *env = std::getenv("S_SPH_THREADS")) threads = std::atoi(env);
  set_thread_count(threads > 0 ? threads : 1);

  try {
    if (*run) return cmd_run(g, name);
    if (*compare) return cmd_compare(g, name, ssph_file, mcs_file, probes);
    if (*converge) {
      std::vector<int> orders;
      std::stringstream ss(orders_text);
      std::string item;
      while (std::getline(ss, item, ','))
        try {
          orders.push_back(std::stoi(item));
        } catch (const std::exception &) {
          throw ConfigError("--orders: malformed entry '" + item + "'");
        }
      return cmd_converge(g, name, orders);
    }
    if (*dump) return cmd_spec_dump(g, name, dump_file);
    if (*valid) return cmd_spec_validate(validate_file);
    if (*inspect) return cmd_kl_inspect(g, name, kl_field);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace ssph::cli
