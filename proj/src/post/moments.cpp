#include "ssph/post/moments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "ssph/common/error.hpp"
#include "ssph/galerkin/solver.hpp"

namespace ssph::post {

void MomentField::append(double t, std::size_t step, const std::vector<double> &m,
                         const std::vector<double> &s) {
  const std::size_t want = static_cast<std::size_t>(components) * nodes();
  if (m.size() != want || s.size() != want) throw ContractViolation("moment slice has wrong size");
  times.push_back(t);
  steps.push_back(step);
  mean.insert(mean.end(), m.begin(), m.end());
  stddev.insert(stddev.end(), s.begin(), s.end());
}

void moments_from_rows(const std::vector<double> &rows_data, std::size_t rows, std::size_t n,
                       std::size_t real, std::vector<double> &mean, std::vector<double> &stddev) {
  mean.resize(real);
  stddev.resize(real);
  for (std::size_t j = 0; j < real; ++j) {
    mean[j] = rows_data[j];
    double s2 = 0.0;
    for (std::size_t l = 1; l < rows; ++l) s2 += rows_data[l * n + j] * rows_data[l * n + j];
    stddev[j] = std::sqrt(s2);
  }
}

void append_state(MomentField &field, const galerkin::GalerkinSolver &solver,
                  const galerkin::State &state) {
  const std::size_t nr = solver.system().real_count();
  if (field.positions.empty()) {
    field.dim = solver.problem().lattice.dim;
    field.components = solver.components();
    field.positions = state.positions;
  }
  std::vector<double> m, s, mm, ss;
  moments_from_rows(state.u, solver.rows(), solver.particles(), nr, m, s);
  if (solver.components() == 2) {
    moments_from_rows(state.v, solver.rows(), solver.particles(), nr, mm, ss);
    m.insert(m.end(), mm.begin(), mm.end());
    s.insert(s.end(), ss.begin(), ss.end());
  }
  field.append(state.t, state.step, m, s);
}

RelativeError relative_l2(const MomentField &a, const MomentField &b, Moment which,
                          std::size_t min_step) {
  if (a.steps != b.steps || a.components != b.components || a.nodes() != b.nodes())
    throw ContractViolation("moment fields live on different grids");
  for (std::size_t j = 0; j < a.nodes(); ++j)
    if (std::abs(a.positions[j].x - b.positions[j].x) > 1e-12 ||
        std::abs(a.positions[j].y - b.positions[j].y) > 1e-12)
      throw ContractViolation("moment fields live on different grids");
  const auto &va = which == Moment::Mean ? a.mean : a.stddev;
  const auto &vb = which == Moment::Mean ? b.mean : b.stddev;
  const std::size_t slice = static_cast<std::size_t>(a.components) * a.nodes();
  double num = 0.0, den = 0.0, self = 0.0;
  for (std::size_t o = 0; o < a.outputs(); ++o) {
    if (a.steps[o] < min_step) continue;
    for (std::size_t k = o * slice; k < (o + 1) * slice; ++k) {
      const double d = va[k] - vb[k];
      num += d * d;
      den += vb[k] * vb[k];
      self += va[k] * va[k];
    }
  }
  if (std::sqrt(den) < 1e-14) return {std::sqrt(self), true};
  return {std::sqrt(num) / std::sqrt(den), false};
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_moments_csv(std::ostream &os, const MomentField &f) {
  os << "# spec_hash=" << f.spec_hash << '\n';
  os << "# source=" << (f.source == Source::SSPH ? "ssph" : "mcs") << '\n';
  os << "# steps=";
  for (std::size_t o = 0; o < f.steps.size(); ++o) os << (o ? "," : "") << f.steps[o];
  os << '\n';
  os << (f.dim == 2 ? "t,x,y" : "t,x");
  if (f.components == 2) os << ",mean_u,std_u,mean_v,std_v\n";
  else os << ",mean,std\n";
  for (std::size_t o = 0; o < f.outputs(); ++o)
    for (std::size_t j = 0; j < f.nodes(); ++j) {
      os << fmt(f.times[o]) << ',' << fmt(f.positions[j].x);
      if (f.dim == 2) os << ',' << fmt(f.positions[j].y);
      for (int c = 0; c < f.components; ++c)
        os << ',' << fmt(f.mean[f.index(o, c, j)]) << ',' << fmt(f.stddev[f.index(o, c, j)]);
      os << '\n';
    }
}

namespace {

template <class T>
T parse_cell(const std::string &cell) {
  T v{};
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || end != cell.data() + cell.size())
    throw ConfigError("moments CSV: malformed number '" + cell + "'");
  return v;
}

}  // namespace

MomentField read_moments_csv(std::istream &is) {
  MomentField f;
  std::string line;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> steps;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# spec_hash=", 0) == 0) {
      f.spec_hash = line.substr(12);
      continue;
    }
    if (line.rfind("# source=", 0) == 0) {
      f.source = line.substr(9) == "mcs" ? Source::MCS : Source::SSPH;
      continue;
    }
    if (line.rfind("# steps=", 0) == 0) {
      std::stringstream ss(line.substr(8));
      std::string cell;
      while (std::getline(ss, cell, ',')) steps.push_back(parse_cell<std::size_t>(cell));
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      header = true;
      f.dim = line.rfind("t,x,y", 0) == 0 ? 2 : 1;
      f.components = line.find("mean_v") != std::string::npos ? 2 : 1;
      continue;
    }
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(parse_cell<double>(cell));
    if (r.size() != static_cast<std::size_t>(1 + f.dim + 2 * f.components))
      throw ConfigError("moments CSV row has wrong column count");
    rows.push_back(std::move(r));
  }
  if (!header) throw ConfigError("moments CSV has no header");
  // Rows are grouped by time; the node set repeats for each output.
  std::size_t nodes = 0;
  while (nodes < rows.size() && rows[nodes][0] == rows[0][0]) ++nodes;
  if (nodes == 0 || rows.size() % nodes != 0) throw ConfigError("moments CSV is not a full grid");
  for (std::size_t j = 0; j < nodes; ++j)
    f.positions.push_back({rows[j][1], f.dim == 2 ? rows[j][2] : 0.0});
  const std::size_t outs = rows.size() / nodes;
  const std::size_t c0 = 1 + static_cast<std::size_t>(f.dim);
  for (std::size_t o = 0; o < outs; ++o) {
    std::vector<double> m(static_cast<std::size_t>(f.components) * nodes), s(m.size());
    for (int c = 0; c < f.components; ++c)
      for (std::size_t j = 0; j < nodes; ++j) {
        const auto &r = rows[o * nodes + j];
        m[static_cast<std::size_t>(c) * nodes + j] = r[c0 + 2 * static_cast<std::size_t>(c)];
        s[static_cast<std::size_t>(c) * nodes + j] = r[c0 + 2 * static_cast<std::size_t>(c) + 1];
      }
    f.append(rows[o * nodes][0], steps.size() == outs ? steps[o] : o, m, s);
  }
  return f;
}

}  // namespace ssph::post
