#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "mb/config.hpp"

namespace mb {

// Uniform cell-centred Cartesian grid, row-major with the last axis contiguous.
struct Grid {
  int dim = 0;
  double h = 0.0;
  Point origin{};  // cell i sits at origin + (i + 1/2) h per axis
  std::array<int, 3> dims{1, 1, 1};
  std::array<std::ptrdiff_t, 3> strides{0, 0, 0};

  std::size_t size() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(dims[d]);
    return n;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= h;
    return v;
  }
  Point center(std::size_t idx) const {
    Point p{};
    for (int d = dim - 1; d >= 0; --d) {
      const std::size_t e = static_cast<std::size_t>(dims[d]);
      p[d] = origin[d] + (static_cast<double>(idx % e) + 0.5) * h;
      idx /= e;
    }
    return p;
  }
};

// Ball-union domain A(x, d) on a grid, with the per-bump patches used by the
// region-wise dual norms. inside01 mirrors the boolean mask as 0/1 doubles for
// the SIMD kernels.
struct DomainMask {
  Grid grid;
  Configuration config;
  double R_star = 0.0;
  double d = 0.0;
  double patch_radius = 0.0;
  std::vector<unsigned char> inside;
  std::vector<double> inside01;
  std::vector<std::vector<double>> patch01;  // one 0/1 array per bump
  std::size_t inside_count = 0;
};

// Scalar field living on a mask; zero outside by construction.
struct Field {
  std::shared_ptr<const DomainMask> mask;
  std::vector<double> v;

  const Grid& grid() const { return mask->grid; }
  double cell_volume() const { return mask->grid.cell_volume(); }
};

Field make_field(std::shared_ptr<const DomainMask> mask);

std::shared_ptr<const DomainMask> build_domain(const Configuration& config, double R_star,
                                               double patch_radius, double d, double h);

// y = (-Laplacian + shift) x restricted to the given 0/1 region (zero Dirichlet
// through zero extension). x must vanish outside the region.
void helmholtz_apply(const Grid& grid, const double* region01, const double* x, double* y,
                     double shift);

// Conjugate gradients for the shifted-Laplacian Riesz problems. Returns the
// iteration count; throws SolverStall beyond max_iters (default 10x cells).
int cg_solve(const Grid& grid, const double* region01, const double* b, double* x, double shift,
             double rtol, int max_iters = 0);

// Discrete H^1(ball)^2 of u: midpoint-rule mass plus face-difference energy,
// faces attributed by midpoint, zero extension outside the mask.
double h1_ball_sq(const Field& u, const Point& center, double radius);

double mass_in_region(const Field& u, const std::vector<unsigned char>& flags);

}  // namespace mb
