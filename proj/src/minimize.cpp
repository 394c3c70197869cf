#include "mb/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "mb/errors.hpp"
#include "mb/kernels.hpp"

namespace mb {

namespace {

constexpr double kUnbounded = 1e300;

// Per-cell upper bound of the emergence box: delta outside the rho-balls,
// unbounded inside, zero outside the mask.
std::vector<double> emergence_box(const DomainMask& mask, const Configuration& config,
                                  const ModelParams& mp) {
  const Grid& g = mask.grid;
  std::vector<double> ub(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!mask.inside[c]) continue;
    const Point x = g.center(c);
    bool core = false;
    for (const auto& p : config.points)
      if (dist(x, p, g.dim) < mp.rho) {
        core = true;
        break;
      }
    ub[c] = core ? kUnbounded : mp.delta;
  }
  return ub;
}

void rescale_to_nehari(Field& u, EmergingSplit& split, const std::vector<double>& Kvals,
                       const ModelParams& mp) {
  for (int i = 0; i < static_cast<int>(split.pieces.size()); ++i) {
    const double t = nehari_scale(split, i, Kvals, mp);
    if (t == 1.0) continue;
    for (std::size_t c : split.piece_cells[static_cast<std::size_t>(i)]) {
      split.pieces[i].v[c] *= t;
      u.v[c] = mp.delta + split.pieces[i].v[c];
    }
  }
}

struct DescentWorkspace {
  std::vector<double> g;        // gradient density incl. penalty
  std::vector<double> s;        // Sobolev direction (warm started)
  std::vector<std::vector<double>> reps;  // constraint representers
  std::vector<std::vector<double>> bdens;
};

}  // namespace

Field initial_guess(const Configuration& config, const RadialProfile& profile,
                    std::shared_ptr<const DomainMask> mask) {
  Field f = make_field(std::move(mask));
  const Grid& g = f.grid();
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!f.mask->inside[c]) continue;
    const Point x = g.center(c);
    double best = 0.0;
    for (const auto& p : config.points) best = std::max(best, eval_w(profile, dist(x, p, g.dim)));
    f.v[c] = best;
  }
  return f;
}

double deviation_linf(const Field& u, const Configuration& config, const RadialProfile& profile,
                      double radius) {
  const Grid& g = u.grid();
  double worst = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Point x = g.center(c);
    for (const auto& p : config.points) {
      const double r = dist(x, p, g.dim);
      if (r < radius) worst = std::max(worst, std::fabs(u.v[c] - eval_w(profile, r)));
    }
  }
  return worst;
}

MinimizeResult minimize_mu(const Problem& prob, const Configuration& config,
                           const SolverOptions& opts) {
  const RadialProfile& profile = *prob.profile;
  const ModelParams& mp = prob.params;
  if (sigma_of(config, profile.R_star) > mp.sigma0 * (1.0 + 1e-12))
    throw std::invalid_argument("minimize_mu: configuration violates the separation defect cap");
  if (prob.d < 0.0 || prob.d > mp.sigma0)
    throw std::invalid_argument("minimize_mu: margin d must lie in [0, sigma0]");

  auto mask = build_domain(config, profile.R_star, 2.0 * mp.R0, prob.d, prob.h);
  const Grid& grid = mask->grid;
  const std::size_t n = grid.size();
  const double vol = grid.cell_volume();
  const auto& KN = kernels::active();
  const std::vector<double> Kvals = sample_potential(prob.K, grid);
  const std::vector<double> ub = emergence_box(*mask, config, mp);
  const int k = config.k();
  const int nd = grid.dim;

  const double eps_res = opts.eps_res > 0.0 ? opts.eps_res : 1e-6 * profile.m0;
  const double wpen = opts.penalty_weight > 0.0 ? opts.penalty_weight : 10.0 / prob.h;

  Field u = initial_guess(config, profile, mask);
  KN.clamp_box(u.v.data(), ub.data(), n);
  EmergingSplit split = emerging_split(u, config, mp);
  rescale_to_nehari(u, split, Kvals, mp);
  double mu = energy(u, Kvals, mp.q);

  DescentWorkspace ws;
  ws.g.assign(n, 0.0);
  ws.s.assign(n, 0.0);
  ws.reps.assign(static_cast<std::size_t>(k * nd), std::vector<double>(n, 0.0));
  ws.bdens.assign(static_cast<std::size_t>(k * nd), std::vector<double>(n, 0.0));

  double tau = 1.0;
  int it = 0;
  bool converged = false;
  std::vector<Point> betas(k);

  for (it = 1; it <= opts.max_iters; ++it) {
    // Gradient density plus barycenter penalty.
    Field gf = grad_energy(u, Kvals, mp.q);
    ws.g = gf.v;
    for (int i = 0; i < k; ++i) {
      betas[i] = barycenter(split, i, config);
      double mass = 0.0;
      for (std::size_t c : split.piece_cells[static_cast<std::size_t>(i)])
        mass += split.pieces[i].v[c] * split.pieces[i].v[c];
      mass *= vol;
      for (std::size_t c : split.piece_cells[static_cast<std::size_t>(i)]) {
        const Point x = grid.center(c);
        double dir = 0.0;
        for (int m = 0; m < nd; ++m)
          dir += betas[i][m] * ((x[m] - config.points[i][m]) - betas[i][m]);
        ws.g[c] += wpen * 4.0 * split.pieces[i].v[c] * dir / mass;
      }
    }
    for (std::size_t c = 0; c < n; ++c) ws.g[c] *= mask->inside01[c];

    // Sobolev direction and tangent projection against (x - x_i) u_i^delta.
    cg_solve(grid, mask->inside01.data(), ws.g.data(), ws.s.data(), 1.0, opts.cg_rtol);
    {
      const int kn = k * nd;
      std::vector<double> gram(static_cast<std::size_t>(kn * kn), 0.0);
      std::vector<double> rhs(kn, 0.0);
      for (int a = 0; a < kn; ++a) {
        const int i = a / nd, m = a % nd;
        auto& bd = ws.bdens[static_cast<std::size_t>(a)];
        std::fill(bd.begin(), bd.end(), 0.0);
        for (std::size_t c : split.piece_cells[static_cast<std::size_t>(i)]) {
          const Point x = grid.center(c);
          bd[c] = (x[m] - config.points[i][m]) * split.pieces[i].v[c];
        }
        cg_solve(grid, mask->inside01.data(), bd.data(),
                 ws.reps[static_cast<std::size_t>(a)].data(), 1.0, opts.cg_rtol);
        rhs[a] = KN.dot(bd.data(), ws.s.data(), n) * vol;
      }
      for (int a = 0; a < kn; ++a)
        for (int b = 0; b <= a; ++b) {
          const double v = KN.dot(ws.bdens[static_cast<std::size_t>(a)].data(),
                                  ws.reps[static_cast<std::size_t>(b)].data(), n) *
                           vol;
          gram[static_cast<std::size_t>(a * kn + b)] = v;
          gram[static_cast<std::size_t>(b * kn + a)] = v;
        }
      // Gauss elimination on the small system.
      std::vector<double> gamma = rhs;
      double dmax = 0.0;
      for (int a = 0; a < kn; ++a)
        dmax = std::max(dmax, std::fabs(gram[static_cast<std::size_t>(a * kn + a)]));
      for (int col = 0; col < kn; ++col) {
        int piv = col;
        for (int r = col + 1; r < kn; ++r)
          if (std::fabs(gram[static_cast<std::size_t>(r * kn + col)]) >
              std::fabs(gram[static_cast<std::size_t>(piv * kn + col)]))
            piv = r;
        if (piv != col) {
          for (int cc = 0; cc < kn; ++cc)
            std::swap(gram[static_cast<std::size_t>(col * kn + cc)],
                      gram[static_cast<std::size_t>(piv * kn + cc)]);
          std::swap(gamma[col], gamma[piv]);
        }
        const double pv = gram[static_cast<std::size_t>(col * kn + col)];
        if (std::fabs(pv) <= 1e-12 * dmax)
          throw DegenerateGram("minimize_mu: degenerate constraint Gram matrix");
        for (int r = 0; r < kn; ++r) {
          if (r == col) continue;
          const double f = gram[static_cast<std::size_t>(r * kn + col)] / pv;
          for (int cc = col; cc < kn; ++cc)
            gram[static_cast<std::size_t>(r * kn + cc)] -=
                f * gram[static_cast<std::size_t>(col * kn + cc)];
          gamma[r] -= f * gamma[col];
        }
      }
      for (int a = 0; a < kn; ++a)
        gamma[a] /= gram[static_cast<std::size_t>(a * kn + a)];
      for (int a = 0; a < kn; ++a)
        KN.axpy(-gamma[a], ws.reps[static_cast<std::size_t>(a)].data(), ws.s.data(), n);
    }

    const double descent = std::max(KN.dot(ws.g.data(), ws.s.data(), n) * vol, 0.0);
    const double gnorm = std::sqrt(descent);

    double beta_max = 0.0;
    for (int i = 0; i < k; ++i)
      for (int m = 0; m < nd; ++m) beta_max = std::max(beta_max, std::fabs(betas[i][m]));

    if (gnorm <= eps_res * (1.0 + std::fabs(mu)) && beta_max <= eps_res) {
      converged = true;
      break;
    }

    // Backtracking over the projected step; the trial is clamped to the
    // emergence box, re-split and Nehari-rescaled before comparison.
    bool accepted = false;
    for (int ls = 0; ls < 45 && !accepted; ++ls) {
      Field ut = u;
      KN.axpy(-tau, ws.s.data(), ut.v.data(), n);
      KN.clamp_box(ut.v.data(), ub.data(), n);
      try {
        EmergingSplit st = emerging_split(ut, config, mp);
        rescale_to_nehari(ut, st, Kvals, mp);
        const double mu_t = energy(ut, Kvals, mp.q);
        if (mu_t <= mu - 1e-4 * tau * descent) {
          u = std::move(ut);
          split = std::move(st);
          mu = mu_t;
          accepted = true;
          tau = std::min(tau * 1.6, 1e3);
        } else {
          tau *= 0.5;
        }
      } catch (const ConstraintError&) {
        tau *= 0.5;
      }
      if (tau < 1e-15) break;
    }
    if (!accepted) {
      if (gnorm <= 10.0 * eps_res * (1.0 + std::fabs(mu)) && beta_max <= 10.0 * eps_res) {
        converged = true;
        break;
      }
      throw MaxIterations("minimize_mu: line search stalled before the residual target");
    }
  }
  if (!converged && it > opts.max_iters)
    throw MaxIterations("minimize_mu: iteration cap reached");

  MinimizeResult res;
  res.u = u;
  res.mu = mu;
  res.iterations = it;
  res.converged = converged;
  const Field gfin = grad_energy(u, Kvals, mp.q);
  for (int i = 0; i < k; ++i) {
    res.barycenters.push_back(barycenter(split, i, config));
    res.nehari_residuals.push_back(
        KN.dot(gfin.v.data(), split.pieces[i].v.data(), n) * vol);
  }
  ProjectedResidual pr = projected_residual(gfin.v, split, config, *mask);
  res.lambdas = pr.lambdas;
  res.residual_star_u = pr.norm;
  res.residual_star_xd = *std::max_element(pr.per_patch_raw.begin(), pr.per_patch_raw.end());

  const double sup_thresh = opts.support_tol * profile.w0;
  res.support_radii.assign(k, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    if (u.v[c] <= sup_thresh) continue;
    const Point x = grid.center(c);
    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
      const double r = dist(x, config.points[i], nd);
      if (r < best) {
        best = r;
        nearest = i;
      }
    }
    res.support_radii[nearest] = std::max(res.support_radii[nearest], best);
  }
  return res;
}

Field outer_relaxation(const Field& u, const Configuration& config, double core_radius,
                       const Problem& prob, const SolverOptions& opts) {
  const ModelParams& mp = prob.params;
  if (core_radius < mp.rho - 0.5 * mp.sigma0 || core_radius >= prob.profile->R_star)
    throw std::invalid_argument("outer_relaxation: core radius out of range");
  const Grid& grid = u.grid();
  const std::size_t n = grid.size();
  const auto& KN = kernels::active();
  const std::vector<double> Kvals = sample_potential(prob.K, grid);

  std::vector<unsigned char> free_cell(n, 0);
  std::vector<double> ub(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    if (!u.mask->inside[c]) continue;
    const Point x = grid.center(c);
    bool core = false;
    for (const auto& p : config.points)
      if (dist(x, p, grid.dim) < core_radius) {
        core = true;
        break;
      }
    free_cell[c] = core ? 0 : 1;
    ub[c] = core ? kUnbounded : mp.delta;
  }

  Field v = u;
  KN.clamp_box(v.v.data(), ub.data(), n);
  // Keep the core values exactly as given.
  for (std::size_t c = 0; c < n; ++c)
    if (!free_cell[c]) v.v[c] = u.v[c];

  double ev = energy(v, Kvals, mp.q);
  double tau = 0.25 * grid.h * grid.h / (2.0 * grid.dim);
  const double step_tol = 1e-10 * std::max(mp.delta, 1e-30);
  for (int it = 1; it <= opts.max_iters; ++it) {
    Field g = grad_energy(v, Kvals, mp.q);
    bool accepted = false;
    double move = 0.0;
    for (int ls = 0; ls < 60 && !accepted; ++ls) {
      Field vt = v;
      for (std::size_t c = 0; c < n; ++c)
        if (free_cell[c]) vt.v[c] = std::min(std::max(v.v[c] - tau * g.v[c], 0.0), mp.delta);
      const double et = energy(vt, Kvals, mp.q);
      if (et <= ev + 1e-14 * std::fabs(ev)) {
        move = 0.0;
        for (std::size_t c = 0; c < n; ++c)
          if (free_cell[c]) move = std::max(move, std::fabs(vt.v[c] - v.v[c]));
        v = std::move(vt);
        ev = et;
        accepted = true;
        tau = std::min(tau * 1.4, 1e3);
      } else {
        tau *= 0.5;
      }
    }
    if (!accepted || move <= step_tol) return v;
  }
  throw MaxIterations("outer_relaxation: iteration cap reached");
}

std::vector<Point> extract_multipliers(MinimizeResult& result, const Configuration& config,
                                       const Problem& prob) {
  const std::vector<double> Kvals = sample_potential(prob.K, result.u.grid());
  EmergingSplit split = emerging_split(result.u, config, prob.params);
  const Field g = grad_energy(result.u, Kvals, prob.params.q);
  ProjectedResidual pr = projected_residual(g.v, split, config, *result.u.mask);
  result.lambdas = pr.lambdas;
  result.residual_star_u = pr.norm;
  result.residual_star_xd = *std::max_element(pr.per_patch_raw.begin(), pr.per_patch_raw.end());
  return pr.lambdas;
}

namespace {

double evaluate_mu(const Problem& prob, const Configuration& config, const SolverOptions& opts) {
  try {
    return minimize_mu(prob, config, opts).mu;
  } catch (const ConstraintError&) {
    return -std::numeric_limits<double>::infinity();
  } catch (const SolverError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

SearchResult mu_k_search(const Problem& prob, const std::vector<Configuration>& seeds,
                         const SolverOptions& opts, double step0, double box_limit) {
  if (seeds.empty()) throw std::invalid_argument("mu_k_search: no seeds");
  const RadialProfile& profile = *prob.profile;
  if (step0 <= 0.0) step0 = 0.25 * profile.R_star;
  if (box_limit <= 0.0) box_limit = 4.0 * profile.R_star + prob.K.a2;

  SearchResult out;
  out.best_mu = -std::numeric_limits<double>::infinity();
  for (const auto& seed : seeds) {
    const double v = evaluate_mu(prob, seed, opts);
    out.seed_values.push_back(v);
    ++out.evaluations;
    if (v > out.best_mu) {
      out.best_mu = v;
      out.best_config = seed;
    }
  }
  if (!std::isfinite(out.best_mu)) return out;

  const int k = out.best_config.k();
  const int nd = out.best_config.dim;
  double step = step0;
  const double step_min = 0.5 * prob.h;

  auto admissible = [&](const Configuration& c) {
    for (const auto& p : c.points)
      for (int d = 0; d < nd; ++d)
        if (std::fabs(p[d]) > box_limit) return false;
    return sigma_of(c, profile.R_star) <= prob.params.sigma0;
  };

  while (step >= step_min) {
    bool improved = false;
    for (int i = 0; i < k; ++i) {
      for (int m = 0; m < nd; ++m) {
        for (int s = -1; s <= 1; s += 2) {
          Configuration cand = out.best_config;
          cand.points[i][m] += s * step;
          if (!admissible(cand)) continue;
          const double v = evaluate_mu(prob, cand, opts);
          ++out.evaluations;
          if (v > out.best_mu) {
            out.best_mu = v;
            out.best_config = cand;
            improved = true;
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return out;
}

std::vector<SweepEntry> alpha_sweep(const Problem& base, Potential::Kind kind,
                                    const std::vector<double>& alphas,
                                    const Configuration& config, const SolverOptions& opts) {
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (alphas[i] > alphas[i - 1])
      throw std::invalid_argument("alpha_sweep: alphas must be non-increasing");

  auto run_one = [&](double alpha) {
    Problem prob = base;
    prob.K = potential_make(kind, alpha);
    SweepEntry e;
    e.alpha = alpha;
    e.result = minimize_mu(prob, config, opts);
    const Grid& grid = e.result.u.grid();
    e.alpha_ploc = ploc_norm_estimate(prob.K, grid, base.profile->R_star);
    e.max_dev_linf = deviation_linf(e.result.u, config, *base.profile, base.params.R0);
    for (const auto& l : e.result.lambdas)
      for (int d = 0; d < config.dim; ++d)
        e.max_abs_lambda = std::max(e.max_abs_lambda, std::fabs(l[d]));
    for (double r : e.result.support_radii)
      e.max_support_radius = std::max(e.max_support_radius, r);
    return e;
  };

  std::vector<SweepEntry> out(alphas.size());
  if (opts.threads > 1) {
    std::vector<std::future<SweepEntry>> futs;
    futs.reserve(alphas.size());
    for (double a : alphas)
      futs.push_back(std::async(std::launch::async, run_one, a));
    for (std::size_t i = 0; i < futs.size(); ++i) out[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < alphas.size(); ++i) out[i] = run_one(alphas[i]);
  }
  return out;
}

}  // namespace mb
