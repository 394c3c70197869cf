#pragma once

#include <memory>
#include <vector>

#include "mb/norms.hpp"
#include "mb/potential.hpp"
#include "mb/radial.hpp"
#include "mb/split.hpp"

namespace mb {

// I(u) = 1/2 int |grad u|^2 - K u^2 + (1/q) int u^q, midpoint rule with the
// face-difference gradient energy (so that grad_energy pairs exactly with it).
double energy(const Field& u, const std::vector<double>& Kvals, double q);

// Truncated per-piece functional; the support measure uses the cell count.
double j_delta(const Field& piece, const std::vector<double>& Kvals, const ModelParams& mp);

// Density of I'(u): -Lap u - K u + u^(q-1), with 0^(q-1) = 0. Pairing a test
// field against it (cell dot x volume) reproduces directional derivatives.
Field grad_energy(const Field& u, const std::vector<double>& Kvals, double q);

// Unique t > 0 zeroing d/dt J_delta(t u_i^delta); requires the quadratic form
// int |grad u_i^delta|^2 - K (u_i^delta)^2 to be negative.
double nehari_scale(const EmergingSplit& split, int i, const std::vector<double>& Kvals,
                    const ModelParams& mp);

// L^r norm over each B(x_i, 2 R0) of (sum_j w_j)^(q-1) - sum_j w_j^(q-1),
// maximised over i; r_exp <= 0 selects the sup norm. Quadrature runs on a
// dedicated fine lattice over the pairwise overlap lenses.
double overlap_defect(const Configuration& config, const RadialProfile& profile,
                      const ModelParams& mp, double r_exp);

// (1/2) sum_j w(t_kappa (x - x_j)) sampled on the mask, with
// t_kappa = R* / (R* + kappa^((2-q)/3)).
Field comparison_field(const Configuration& config, double kappa, const RadialProfile& profile,
                       std::shared_ptr<const DomainMask> mask);

struct EnergyReport {
  double I_value = 0.0;
  double Iinf_value = 0.0;
  std::vector<double> Jdelta_per_bump;
  std::vector<double> nehari_residuals;  // I'(u) u_i^delta
  double grad_dual_norm = 0.0;           // patch-max dual norm of I'(u)
};

EnergyReport energy_report(const Field& u, const EmergingSplit& split,
                           const std::vector<double>& Kvals, const ModelParams& mp,
                           const DomainMask& mask);

}  // namespace mb
