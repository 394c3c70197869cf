#include "mb/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mb {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string profile_csv(const RadialProfile& p) {
  std::ostringstream os;
  os << "r,w\n";
  for (std::size_t i = 0; i < p.r_grid.size(); ++i)
    os << fmt17(p.r_grid[i]) << "," << fmt17(p.w_vals[i]) << "\n";
  return os.str();
}

namespace {

std::string coord_header(int dim) {
  std::string h;
  for (int d = 0; d < dim; ++d) h += "x" + std::to_string(d + 1) + ",";
  return h;
}

}  // namespace

std::string field_csv(const Field& f) {
  const Grid& g = f.grid();
  std::ostringstream os;
  os << coord_header(g.dim) << "u\n";
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!f.mask->inside[c]) continue;
    const Point x = g.center(c);
    for (int d = 0; d < g.dim; ++d) os << fmt17(x[d]) << ",";
    os << fmt17(f.v[c]) << "\n";
  }
  return os.str();
}

std::string mask_csv(const DomainMask& m) {
  const Grid& g = m.grid;
  std::ostringstream os;
  os << coord_header(g.dim) << "inside\n";
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Point x = g.center(c);
    for (int d = 0; d < g.dim; ++d) os << fmt17(x[d]) << ",";
    os << (m.inside[c] ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string constants_report(const RadialProfile& p, const ModelParams& mp) {
  std::ostringstream os;
  os << "q: " << fmt17(p.q) << "\n";
  os << "dim: " << p.dim << "\n";
  os << "sigma0: " << fmt17(mp.sigma0) << "\n";
  os << "delta: " << fmt17(mp.delta) << "\n";
  os << "rho: " << fmt17(mp.rho) << "\n";
  os << "R0: " << fmt17(mp.R0) << "\n";
  os << "R_star: " << fmt17(p.R_star) << "\n";
  os << "w0: " << fmt17(p.w0) << "\n";
  os << "m0: " << fmt17(p.m0) << "\n";
  os << "a1: " << fmt17(mp.a1) << "\n";
  os << "t_star: " << fmt17(mp.t_star) << "\n";
  os << "k0: " << mp.k0 << "\n";
  os << "touchdown_coeff: " << fmt17(p.touchdown_coeff) << "\n";
  for (const auto& c : verify_constants(p, mp))
    os << "inequality \"" << c.name << "\": " << fmt17(c.lhs) << " < " << fmt17(c.rhs) << " : "
       << (c.pass ? "verified" : "VIOLATED") << "\n";
  return os.str();
}

std::string minimize_report(const MinimizeResult& r, const Configuration& config) {
  std::ostringstream os;
  os << "mu: " << fmt17(r.mu) << "\n";
  os << "iterations: " << r.iterations << "\n";
  os << "converged: " << (r.converged ? 1 : 0) << "\n";
  os << "residual_star_u: " << fmt17(r.residual_star_u) << "\n";
  os << "residual_star_xd: " << fmt17(r.residual_star_xd) << "\n";
  for (int i = 0; i < config.k(); ++i) {
    os << "bump " << i << " centre:";
    for (int d = 0; d < config.dim; ++d) os << " " << fmt17(config.points[i][d]);
    os << "\n";
    os << "bump " << i << " nehari_residual: " << fmt17(r.nehari_residuals[i]) << "\n";
    os << "bump " << i << " barycenter:";
    for (int d = 0; d < config.dim; ++d) os << " " << fmt17(r.barycenters[i][d]);
    os << "\n";
    os << "bump " << i << " lambda:";
    for (int d = 0; d < config.dim; ++d) os << " " << fmt17(r.lambdas[i][d]);
    os << "\n";
    os << "bump " << i << " support_radius: " << fmt17(r.support_radii[i]) << "\n";
  }
  return os.str();
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, t.header)) throw std::runtime_error("empty csv " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string csv_text(const CsvTable& t) {
  std::ostringstream os;
  os << t.header << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
    os << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace mb
