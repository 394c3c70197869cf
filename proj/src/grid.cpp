#include "mb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mb/errors.hpp"
#include "mb/kernels.hpp"

namespace mb {

Field make_field(std::shared_ptr<const DomainMask> mask) {
  Field f;
  f.v.assign(mask->grid.size(), 0.0);
  f.mask = std::move(mask);
  return f;
}

std::shared_ptr<const DomainMask> build_domain(const Configuration& config, double R_star,
                                               double patch_radius, double d, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("build_domain: spacing must be positive");
  if (d < 0.0) throw std::invalid_argument("build_domain: margin must be nonnegative");
  if (config.k() < 1) throw std::invalid_argument("build_domain: empty configuration");

  auto dm = std::make_shared<DomainMask>();
  dm->config = config;
  dm->R_star = R_star;
  dm->d = d;
  dm->patch_radius = patch_radius;
  Grid& g = dm->grid;
  g.dim = config.dim;
  g.h = h;

  const double R = R_star + d;
  const Point& anchor = config.points[0];
  for (int ax = 0; ax < g.dim; ++ax) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& p : config.points) {
      lo = std::min(lo, p[ax] - R);
      hi = std::max(hi, p[ax] + R);
    }
    lo -= 2.5 * h;
    hi += 2.5 * h;
    // Anchor the lattice so the first centre lands on a cell centre; keeps
    // translated runs congruent and symmetric profiles symmetric on the grid.
    const double i = std::ceil((anchor[ax] - lo) / h - 0.5);
    g.origin[ax] = anchor[ax] - (i + 0.5) * h;
    g.dims[ax] = static_cast<int>(std::ceil((hi - g.origin[ax]) / h));
  }
  g.strides[g.dim - 1] = 1;
  for (int ax = g.dim - 2; ax >= 0; --ax)
    g.strides[ax] = g.strides[ax + 1] * g.dims[ax + 1];

  const std::size_t n = g.size();
  dm->inside.assign(n, 0);
  dm->inside01.assign(n, 0.0);
  dm->patch01.assign(config.points.size(), std::vector<double>(n, 0.0));
  std::vector<std::size_t> per_ball(config.points.size(), 0);

  for (std::size_t c = 0; c < n; ++c) {
    const Point x = g.center(c);
    bool in = false;
    for (int j = 0; j < config.k(); ++j) {
      if (dist(x, config.points[j], g.dim) < R) {
        in = true;
        ++per_ball[j];
      }
    }
    if (!in) continue;
    dm->inside[c] = 1;
    dm->inside01[c] = 1.0;
    ++dm->inside_count;
    for (int j = 0; j < config.k(); ++j)
      if (dist(x, config.points[j], g.dim) < patch_radius) dm->patch01[j][c] = 1.0;
  }
  for (std::size_t cnt : per_ball)
    if (cnt < 100) throw GridTooCoarse("build_domain: a ball holds fewer than 100 cells");
  return dm;
}

void helmholtz_apply(const Grid& grid, const double* region01, const double* x, double* y,
                     double shift) {
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const double ca = shift + 2.0 * grid.dim * inv_h2;
  kernels::active().helmholtz(x, y, region01, grid.dims.data(), grid.strides.data(), grid.dim,
                              ca, inv_h2);
}

int cg_solve(const Grid& grid, const double* region01, const double* b, double* x, double shift,
             double rtol, int max_iters) {
  const auto& K = kernels::active();
  const std::size_t n = grid.size();
  if (max_iters <= 0) max_iters = static_cast<int>(10 * n);

  const double bnorm2 = K.dot(b, b, n);
  if (bnorm2 == 0.0) {
    std::fill(x, x + n, 0.0);
    return 0;
  }
  std::vector<double> r(n), p(n), ap(n);
  helmholtz_apply(grid, region01, x, ap.data(), shift);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  p = r;
  double rs = K.dot(r.data(), r.data(), n);
  const double stop2 = rtol * rtol * bnorm2;
  for (int it = 1; it <= max_iters; ++it) {
    if (rs <= stop2) return it - 1;
    helmholtz_apply(grid, region01, p.data(), ap.data(), shift);
    const double alpha = rs / K.dot(p.data(), ap.data(), n);
    K.axpy(alpha, p.data(), x, n);
    K.axpy(-alpha, ap.data(), r.data(), n);
    const double rs_new = K.dot(r.data(), r.data(), n);
    K.xpay(r.data(), rs_new / rs, p.data(), n);
    rs = rs_new;
  }
  throw SolverStall("cg_solve: residual target not reached");
}

double h1_ball_sq(const Field& u, const Point& center, double radius) {
  const Grid& g = u.grid();
  const double vol = g.cell_volume();
  const double face_w = vol / (g.h * g.h);
  const std::size_t n = g.size();
  double mass = 0.0, energy = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const Point x = g.center(c);
    if (dist(x, center, g.dim) < radius && u.v[c] != 0.0) mass += u.v[c] * u.v[c];
    // Faces to the + side per axis, attributed by their midpoints.
    std::size_t rem = c;
    std::array<int, 3> mi{};
    for (int d = g.dim - 1; d >= 0; --d) {
      mi[d] = static_cast<int>(rem % static_cast<std::size_t>(g.dims[d]));
      rem /= static_cast<std::size_t>(g.dims[d]);
    }
    for (int ax = 0; ax < g.dim; ++ax) {
      if (mi[ax] + 1 >= g.dims[ax]) continue;
      Point mid = x;
      mid[ax] += 0.5 * g.h;
      if (dist(mid, center, g.dim) >= radius) continue;
      const double diff = u.v[c + static_cast<std::size_t>(g.strides[ax])] - u.v[c];
      if (diff != 0.0) energy += diff * diff;
    }
  }
  return mass * vol + energy * face_w;
}

double mass_in_region(const Field& u, const std::vector<unsigned char>& flags) {
  double m = 0.0;
  for (std::size_t c = 0; c < u.v.size(); ++c)
    if (flags[c]) m += u.v[c];
  return m * u.cell_volume();
}

}  // namespace mb
