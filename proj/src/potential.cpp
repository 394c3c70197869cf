#include "mb/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace mb {

double Potential::operator()(const Point& x, int dim) const {
  double r2 = 0.0;
  for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
  switch (kind) {
    case Kind::unit:
      return 1.0;
    case Kind::radial_dip:
      return 1.0 - alpha / (1.0 + r2);
    case Kind::compact_bump:
      return 1.0 + alpha * (2.0 * std::exp(-r2) - std::exp(-0.25 * r2));
  }
  return 1.0;
}

Potential potential_make(Potential::Kind kind, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("potential_make: alpha must be >= 0");
  Potential K;
  K.kind = kind;
  K.alpha = alpha;
  switch (kind) {
    case Potential::Kind::unit:
      K.alpha = 0.0;
      K.a1 = 1.0;
      K.a2 = 0.0;
      break;
    case Potential::Kind::radial_dip:
      if (alpha >= 1.0) throw std::invalid_argument("radial_dip: alpha must be < 1");
      K.a1 = 1.0;
      K.a2 = 0.0;
      break;
    case Potential::Kind::compact_bump:
      K.a1 = 1.0 + 2.0 * alpha;
      // 2 e^{-r^2} >= e^{-r^2/4} exactly on r^2 <= (4/3) ln 2
      K.a2 = std::sqrt(4.0 / 3.0 * std::log(2.0));
      break;
  }
  return K;
}

Potential::Kind potential_kind_from(const std::string& name) {
  if (name == "unit") return Potential::Kind::unit;
  if (name == "radial_dip") return Potential::Kind::radial_dip;
  if (name == "compact_bump") return Potential::Kind::compact_bump;
  throw std::invalid_argument("unknown potential kind: " + name);
}

std::string potential_kind_name(Potential::Kind kind) {
  switch (kind) {
    case Potential::Kind::unit: return "unit";
    case Potential::Kind::radial_dip: return "radial_dip";
    case Potential::Kind::compact_bump: return "compact_bump";
  }
  return "unit";
}

std::vector<double> sample_potential(const Potential& K, const Grid& grid) {
  std::vector<double> vals(grid.size());
  for (std::size_t c = 0; c < vals.size(); ++c) vals[c] = K(grid.center(c), grid.dim);
  return vals;
}

double ploc_norm_estimate(const Potential& K, const Grid& grid, double R_star) {
  if (K.kind == Potential::Kind::unit) return 0.0;
  const double p = static_cast<double>(grid.dim);
  const double stride = 0.5 * R_star;
  const double vol = grid.cell_volume();
  double worst = 0.0;
  // Ball centres on a coarse lattice across the box (grid corners included).
  std::array<int, 3> counts{1, 1, 1};
  for (int d = 0; d < grid.dim; ++d)
    counts[d] = std::max(1, static_cast<int>(grid.dims[d] * grid.h / stride)) + 1;
  std::array<int, 3> it{0, 0, 0};
  for (;;) {
    Point c{};
    for (int d = 0; d < grid.dim; ++d) c[d] = grid.origin[d] + it[d] * stride;
    double acc = 0.0;
    for (std::size_t cell = 0; cell < grid.size(); ++cell) {
      const Point x = grid.center(cell);
      if (dist(x, c, grid.dim) < 1.0) acc += std::pow(std::fabs(K(x, grid.dim) - 1.0), p) * vol;
    }
    worst = std::max(worst, std::pow(acc, 1.0 / p));
    int d = grid.dim - 1;
    for (; d >= 0; --d) {
      if (++it[d] < counts[d]) break;
      it[d] = 0;
    }
    if (d < 0) break;
  }
  return worst;
}

}  // namespace mb
