#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mb {

// Tabulated nonnegative radial profile with compact support [0, R_star].
// Immutable after construction; safe to share read-only across threads.
struct RadialProfile {
  double q = 0.0;
  int dim = 0;  // space dimension N
  std::vector<double> r_grid;   // uniform nodes from 0 to beyond R_star
  std::vector<double> w_vals;   // profile values, exactly 0 for r >= R_star
  std::vector<double> dw_vals;  // radial derivative at the nodes
  std::vector<double> slopes;   // monotone-limited interpolation slopes
  double w0 = 0.0;              // peak value w(0)
  double R_star = 0.0;          // support radius
  double m0 = 0.0;              // limit energy of the profile
  double touchdown_coeff = 0.0; // prefactor of the contact power law
  double r_trusted = 0.0;       // last radius backed by the integrated trajectory

  double h() const { return r_grid.size() > 1 ? r_grid[1] - r_grid[0] : 0.0; }
};

// Constants that gate the emergence and support machinery. All are derived
// from the profile and re-verifiable through verify_constants().
struct ModelParams {
  double q = 0.0;
  int dim = 0;
  double sigma0 = 0.0;
  double delta = 0.0;   // emergence level, w(R_star - 4*sigma0)
  double rho = 0.0;     // core radius, R_star - 3*sigma0
  double R0 = 0.0;      // outer radius, R_star + sigma0^((2-q)/2)
  double a1 = 1.0;      // potential cap
  double t_star = 0.0;  // fixed at (2-q)/2
  int k0 = 0;           // cap on neighbours within 3*R0
};

struct ParamCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// Shooting solve of w'' + (N-1)/r w' = -w + w^(q-1), w'(0) = 0, bisecting the
// peak value until the trajectory reaches w = w' = 0 at a finite radius.
RadialProfile solve_ground_state(double q, int dim, double tol,
                                 int nodes_per_radius = 4096);

double eval_w(const RadialProfile& p, double r);
double eval_dw(const RadialProfile& p, double r);

// Least-squares fit of log w against log(R_star - r) over the trajectory-backed
// window (R_star - sigma_fit, R_star); sigma_fit <= 0 picks a default window.
// Returns {exponent, prefactor}.
std::pair<double, double> boundary_fit(const RadialProfile& p, double sigma_fit = 0.0);

ModelParams derive_constants(const RadialProfile& p, double sigma0_init, double a1);
std::vector<ParamCheck> verify_constants(const RadialProfile& p, const ModelParams& mp);

// Radial quadrature of the limit energy; m0_nehari_identity evaluates the
// algebraically equivalent (1/q - 1/2)||w||_q^q route.
double m0_energy(const RadialProfile& p);
double m0_nehari_identity(const RadialProfile& p);

double sphere_area(int dim);  // |S^(N-1)|

// Max finite-difference residual of the radial equation over nodes in [r_lo, r_hi].
double max_ode_residual(const RadialProfile& p, double r_lo, double r_hi);

}  // namespace mb
