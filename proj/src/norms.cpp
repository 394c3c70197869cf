#include "mb/norms.hpp"

#include <algorithm>
#include <cmath>

#include "mb/errors.hpp"
#include "mb/kernels.hpp"

namespace mb {

double norm_xd(const Field& u, const Configuration& config, double R_star, double d) {
  double worst = 0.0;
  for (const auto& p : config.points)
    worst = std::max(worst, h1_ball_sq(u, p, R_star + d));
  return std::sqrt(worst);
}

double dual_norm_region(const Grid& grid, const std::vector<double>& region01,
                        const std::vector<double>& h_density, double rtol) {
  const std::size_t n = grid.size();
  std::vector<double> b(n), g(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) b[c] = h_density[c] * region01[c];
  cg_solve(grid, region01.data(), b.data(), g.data(), 1.0, rtol);
  const double val = kernels::active().dot(b.data(), g.data(), n) * grid.cell_volume();
  return std::sqrt(std::max(val, 0.0));
}

double dual_norm_patch_max(const DomainMask& mask, const std::vector<double>& h_density,
                           double rtol) {
  double worst = 0.0;
  for (const auto& patch : mask.patch01)
    worst = std::max(worst, dual_norm_region(mask.grid, patch, h_density, rtol));
  return worst;
}

namespace {

// Solve the small SPD Gram system M x = c in place; dim <= 3.
void solve_gram(double M[3][3], const double c[3], double x[3], int nd) {
  double a[3][4];
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < nd; ++j) a[i][j] = M[i][j];
    a[i][nd] = c[i];
  }
  double diag_max = 0.0;
  for (int i = 0; i < nd; ++i) diag_max = std::max(diag_max, std::fabs(a[i][i]));
  for (int col = 0; col < nd; ++col) {
    int piv = col;
    for (int r = col + 1; r < nd; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (std::fabs(a[col][col]) <= 1e-12 * diag_max)
      throw DegenerateGram("constraint-gradient representers are linearly dependent");
    for (int r = 0; r < nd; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int cc = col; cc <= nd; ++cc) a[r][cc] -= f * a[col][cc];
    }
  }
  for (int i = 0; i < nd; ++i) x[i] = a[i][nd] / a[i][i];
}

}  // namespace

ProjectedResidual projected_residual(const std::vector<double>& h_density,
                                     const EmergingSplit& split, const Configuration& config,
                                     const DomainMask& mask, double rtol) {
  const Grid& grid = mask.grid;
  const auto& K = kernels::active();
  const std::size_t n = grid.size();
  const int nd = grid.dim;
  const double vol = grid.cell_volume();
  const int k = config.k();

  ProjectedResidual out;
  out.lambdas.assign(k, Point{});
  out.per_patch.assign(k, 0.0);
  out.per_patch_raw.assign(k, 0.0);

  std::vector<double> b(n), g(n), rep[3], bdens[3];
  for (int j = 0; j < k; ++j) {
    const auto& patch = mask.patch01[j];
    // Riesz lift of h restricted to the patch.
    for (std::size_t c = 0; c < n; ++c) b[c] = h_density[c] * patch[c];
    g.assign(n, 0.0);
    cg_solve(grid, patch.data(), b.data(), g.data(), 1.0, rtol);
    const double h2 = std::max(K.dot(b.data(), g.data(), n) * vol, 0.0);
    out.per_patch_raw[j] = std::sqrt(h2);

    // Constraint-gradient densities (x - x_j)_m u_j^delta and their lifts.
    double c_rhs[3] = {0, 0, 0};
    double M[3][3] = {};
    for (int m = 0; m < nd; ++m) {
      bdens[m].assign(n, 0.0);
      for (std::size_t c : split.piece_cells[static_cast<std::size_t>(j)]) {
        const Point x = grid.center(c);
        bdens[m][c] = (x[m] - config.points[j][m]) * split.pieces[j].v[c] * patch[c];
      }
      rep[m].assign(n, 0.0);
      cg_solve(grid, patch.data(), bdens[m].data(), rep[m].data(), 1.0, rtol);
      c_rhs[m] = K.dot(b.data(), rep[m].data(), n) * vol;
    }
    for (int m = 0; m < nd; ++m)
      for (int mm = 0; mm <= m; ++mm)
        M[m][mm] = M[mm][m] = K.dot(bdens[m].data(), rep[mm].data(), n) * vol;

    double lam[3] = {0, 0, 0};
    solve_gram(M, c_rhs, lam, nd);
    double reduction = 0.0;
    for (int m = 0; m < nd; ++m) {
      out.lambdas[j][m] = lam[m];
      reduction += lam[m] * c_rhs[m];
    }
    out.per_patch[j] = std::sqrt(std::max(h2 - reduction, 0.0));
    out.norm = std::max(out.norm, out.per_patch[j]);
  }
  return out;
}

}  // namespace mb
