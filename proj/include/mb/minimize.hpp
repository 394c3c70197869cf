#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mb/energy.hpp"

namespace mb {

struct SolverOptions {
  int max_iters = 50000;
  double eps_res = 0.0;         // <= 0 picks 1e-6 * m0
  double penalty_weight = 0.0;  // barycenter penalty; <= 0 picks 10 / h
  int nehari_period = 1;        // rescale every this many accepted steps
  std::uint64_t seed = 0;
  double cg_rtol = 1e-8;
  double support_tol = 1e-6;    // support threshold relative to w0
  int threads = 1;
  bool verbose = false;
};

struct MinimizeResult {
  Field u;
  double mu = 0.0;
  std::vector<Point> barycenters;
  std::vector<double> nehari_residuals;  // I'(u) u_i^delta
  std::vector<Point> lambdas;
  double residual_star_u = 0.0;    // projected patch-max dual norm of I'(u)
  double residual_star_xd = 0.0;   // unprojected patch-max dual norm of I'(u)
  std::vector<double> support_radii;
  int iterations = 0;
  bool converged = false;
};

// Everything a run needs besides the centre set.
struct Problem {
  const RadialProfile* profile = nullptr;
  ModelParams params;
  Potential K;
  double d = 0.0;  // domain margin, in [0, sigma0]
  double h = 0.0;  // grid spacing
};

// Pointwise max of translated ground states sampled on the mask.
Field initial_guess(const Configuration& config, const RadialProfile& profile,
                    std::shared_ptr<const DomainMask> mask);

// Projected Sobolev-gradient descent over the emergence box with per-bump
// Nehari rescaling and barycenter tangent projection plus penalty.
MinimizeResult minimize_mu(const Problem& prob, const Configuration& config,
                           const SolverOptions& opts);

// Convex relaxation outside the cores: values in [0, delta] off the fixed
// core region; unique minimiser of the strictly convex truncated functional.
Field outer_relaxation(const Field& u, const Configuration& config, double core_radius,
                       const Problem& prob, const SolverOptions& opts);

// Per-bump multipliers of the barycenter constraints, extracted from the
// projected patch residuals of I'(u).
std::vector<Point> extract_multipliers(MinimizeResult& result, const Configuration& config,
                                       const Problem& prob);

struct SearchResult {
  Configuration best_config;
  double best_mu = 0.0;
  std::vector<double> seed_values;
  int evaluations = 0;
};

// Derivative-free coordinate ascent over centre positions, sigma-admissibility
// enforced by rejection, confined to [-box_limit, box_limit]^N.
SearchResult mu_k_search(const Problem& prob, const std::vector<Configuration>& seeds,
                         const SolverOptions& opts, double step0 = 0.0, double box_limit = 0.0);

struct SweepEntry {
  double alpha = 0.0;
  double alpha_ploc = 0.0;  // sampled ||K-1||_{p,loc}
  MinimizeResult result;
  double max_dev_linf = 0.0;      // max_i ||u - w(.-x_i)||_inf over B(x_i, R0)
  double max_abs_lambda = 0.0;
  double max_support_radius = 0.0;
};

// minimize_mu per alpha (decreasing), same grid and constants throughout.
std::vector<SweepEntry> alpha_sweep(const Problem& base, Potential::Kind kind,
                                    const std::vector<double>& alphas,
                                    const Configuration& config, const SolverOptions& opts);

// Sup over the R0-balls of |u - w(.-x_i)|.
double deviation_linf(const Field& u, const Configuration& config, const RadialProfile& profile,
                      double radius);

}  // namespace mb
