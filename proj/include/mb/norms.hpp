#pragma once

#include <vector>

#include "mb/grid.hpp"
#include "mb/split.hpp"

namespace mb {

// Max over bumps of the H^1 norm restricted to B(x_j, R_star + d).
double norm_xd(const Field& u, const Configuration& config, double R_star, double d);

// Dual (H^-1) norm of the density h over the 0/1 region: solve the Riesz
// problem (-Laplacian + 1) g = h with zero Dirichlet data and return
// sqrt(<h, g>). rtol is the CG residual target.
double dual_norm_region(const Grid& grid, const std::vector<double>& region01,
                        const std::vector<double>& h_density, double rtol = 1e-10);

// Patch-max dual norm max_j ||h||_{H^-1(patch_j)}.
double dual_norm_patch_max(const DomainMask& mask, const std::vector<double>& h_density,
                           double rtol = 1e-10);

struct ProjectedResidual {
  double norm = 0.0;                   // max over patches after projection
  std::vector<Point> lambdas;          // minimising coefficients per bump
  std::vector<double> per_patch;       // projected norm per patch
  std::vector<double> per_patch_raw;   // unprojected norm per patch
};

// Per patch j, minimise over lambda the dual norm of
// h - lambda . (x - x_j) u_j^delta via the Gram system of Riesz representers.
ProjectedResidual projected_residual(const std::vector<double>& h_density,
                                     const EmergingSplit& split, const Configuration& config,
                                     const DomainMask& mask, double rtol = 1e-10);

}  // namespace mb
