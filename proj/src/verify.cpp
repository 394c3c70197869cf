#include "mb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mb/errors.hpp"
#include "mb/io.hpp"

namespace mb {

std::string report_text(const VerificationReport& rep) {
  std::ostringstream os;
  for (const auto& e : rep.entries) {
    os << (e.pass ? "[pass] " : "[FAIL] ") << e.name << ": measured " << fmt17(e.measured)
       << ", bound " << fmt17(e.bound) << ", tolerance " << fmt17(e.tolerance);
    if (!e.note.empty()) os << " (" << e.note << ")";
    os << "\n";
  }
  return os.str();
}

std::string report_csv(const VerificationReport& rep) {
  std::ostringstream os;
  os << "name,measured,bound,pass\n";
  for (const auto& e : rep.entries)
    os << e.name << "," << fmt17(e.measured) << "," << fmt17(e.bound) << ","
       << (e.pass ? 1 : 0) << "\n";
  return os.str();
}

void check_support(VerificationReport& rep, const MinimizeResult& result,
                   const Configuration& config, const Problem& prob, double tol) {
  const Field& u = result.u;
  const Grid& g = u.grid();
  const ModelParams& mp = prob.params;
  const double Rs = prob.profile->R_star;

  double total = 0.0, out_R0 = 0.0, emerging_out = 0.0, band = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double uc = u.v[c];
    if (uc <= 0.0) continue;
    total += uc;
    const Point x = g.center(c);
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& p : config.points) dmin = std::min(dmin, dist(x, p, g.dim));
    if (dmin >= mp.R0) out_R0 += uc;
    if (uc > mp.delta && dmin >= mp.rho - 0.5 * mp.sigma0) emerging_out += uc - mp.delta;
    if (dmin >= Rs + 0.5 * prob.d && dmin < Rs + prob.d) band += uc;
  }
  const double denom = std::max(total, 1e-300);
  rep.add({"mass fraction outside the outer-radius balls", out_R0 / denom, tol,
           out_R0 / denom <= tol, tol, ""});
  rep.add({"emerging mass fraction outside the shrunken core balls", emerging_out / denom, tol,
           emerging_out / denom <= tol, tol, ""});
  rep.add({"mass fraction on the outer margin band", band / denom, tol, band / denom <= tol,
           tol, ""});
}

void support_comparison_bound(VerificationReport& rep, const Field& u,
                              const Configuration& config, const Problem& prob, double kappa) {
  const Grid& g = u.grid();
  const RadialProfile& profile = *prob.profile;
  const double Rs = profile.R_star;

  double umax_out = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (u.v[c] == 0.0) continue;
    const Point x = g.center(c);
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& p : config.points) dmin = std::min(dmin, dist(x, p, g.dim));
    if (dmin >= Rs) umax_out = std::max(umax_out, u.v[c]);
  }
  if (umax_out > kappa)
    throw PreconditionFail("support_comparison_bound: u exceeds kappa outside the support balls");

  const Field wt = comparison_field(config, kappa, profile, u.mask);
  const double inflate = std::pow(kappa, (2.0 - profile.q) / 3.0);
  double worst_gap = -std::numeric_limits<double>::infinity();
  double mass_outside_inflated = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Point x = g.center(c);
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& p : config.points) dmin = std::min(dmin, dist(x, p, g.dim));
    if (dmin >= Rs) worst_gap = std::max(worst_gap, u.v[c] - wt.v[c]);
    if (dmin >= Rs + inflate) mass_outside_inflated += u.v[c];
  }
  mass_outside_inflated *= g.cell_volume();
  const double tol = 1e-12 * std::max(1.0, profile.w0);
  rep.add({"excess of u over the comparison field outside the support balls", worst_gap, 0.0,
           worst_gap <= tol, tol, ""});
  rep.add({"mass outside the kappa-inflated balls", mass_outside_inflated, 0.0,
           mass_outside_inflated <= tol, tol, ""});
}

double stability_ratio(const Field& u, const Configuration& config, const Problem& prob) {
  const RadialProfile& profile = *prob.profile;
  const ModelParams& mp = prob.params;
  const Grid& g = u.grid();
  const double Rs = profile.R_star;

  if (sigma_of(config, Rs) > 0.5 * mp.sigma0)
    throw HypothesisFail("stability_ratio: separation defect above sigma0/2");
  double umin = 0.0;
  for (double v : u.v) umin = std::min(umin, v);
  if (umin < -1e-12 * profile.w0) throw HypothesisFail("stability_ratio: u is not nonnegative");
  EmergingSplit split = emerging_split(u, config, mp);  // throws NotEmerging

  // Per-bump L2 deviation gate (surrogate for the smallness hypothesis).
  const double vol = g.cell_volume();
  double w_l2sq = 0.0;
  {
    const double h = profile.h();
    for (std::size_t i = 0; i < profile.r_grid.size(); ++i)
      w_l2sq += profile.w_vals[i] * profile.w_vals[i] *
                std::pow(profile.r_grid[i], profile.dim - 1) * h;
    w_l2sq *= sphere_area(profile.dim);
  }
  Field wsum = make_field(u.mask);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Point x = g.center(c);
    double s = 0.0;
    for (const auto& p : config.points) s += eval_w(profile, dist(x, p, g.dim));
    wsum.v[c] = s * u.mask->inside01[c];
  }
  for (int i = 0; i < config.k(); ++i) {
    double dev = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) {
      const Point x = g.center(c);
      const double r = dist(x, config.points[i], g.dim);
      if (r < Rs) {
        const double diff = u.v[c] - eval_w(profile, r);
        dev += diff * diff;
      }
    }
    dev *= vol;
    if (dev > 0.04 * w_l2sq)  // (0.2 ||w||_2)^2
      throw HypothesisFail("stability_ratio: per-bump L2 deviation above the gate");
    const Point b = barycenter(split, i, config);
    double bn = 0.0;
    for (int d = 0; d < g.dim; ++d) bn += b[d] * b[d];
    if (std::sqrt(bn) > 1e-3 * Rs)
      throw HypothesisFail("stability_ratio: barycenter offset above the gate");
  }

  Field diff = u;
  for (std::size_t c = 0; c < g.size(); ++c) diff.v[c] -= wsum.v[c];
  const double numer = norm_xd(diff, config, Rs, prob.d);

  const std::vector<double> ones(g.size(), 1.0);
  const Field gu = grad_energy(u, ones, mp.q);
  const Field gv = grad_energy(wsum, ones, mp.q);
  std::vector<double> gd(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) gd[c] = gu.v[c] - gv.v[c];
  const double denom = projected_residual(gd, split, config, *u.mask).norm;

  const double floor_scale =
      1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, profile.w0);
  if (numer <= floor_scale && denom <= floor_scale)
    return std::numeric_limits<double>::quiet_NaN();  // degenerate, skip
  return numer / std::max(denom, floor_scale);
}

void annulus_linf_check(VerificationReport& rep, const MinimizeResult& result,
                        const Configuration& config, const Problem& prob, double R) {
  const RadialProfile& profile = *prob.profile;
  const ModelParams& mp = prob.params;
  if (!(R > mp.rho && R <= profile.R_star))
    throw std::invalid_argument("annulus_linf_check: R must lie in (rho, R_star]");
  const Field& u = result.u;
  const Grid& g = u.grid();

  double lhs = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!u.mask->inside[c]) continue;
    const Point x = g.center(c);
    double dmin = std::numeric_limits<double>::infinity();
    double wsum = 0.0;
    for (const auto& p : config.points) {
      const double r = dist(x, p, g.dim);
      dmin = std::min(dmin, r);
      wsum += eval_w(profile, r);
    }
    if (dmin > R) lhs = std::max(lhs, std::fabs(u.v[c] - wsum));
  }

  double dev_l2 = 0.0;
  const double vol = g.cell_volume();
  for (int i = 0; i < config.k(); ++i) {
    double dev = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) {
      const Point x = g.center(c);
      const double r = dist(x, config.points[i], g.dim);
      if (r < profile.R_star + prob.d) {
        const double diff = u.v[c] - eval_w(profile, r);
        dev += diff * diff;
      }
    }
    dev_l2 = std::max(dev_l2, std::sqrt(dev * vol));
  }
  const double alpha = ploc_norm_estimate(prob.K, g, profile.R_star);
  const double bracket = dev_l2 + sigma_of(config, profile.R_star) + alpha;
  const double cr = lhs / std::max(bracket, 1e-300);
  rep.add({"annulus sup deviation over its driving bracket", cr, 0.0, std::isfinite(cr), 0.0,
           "lhs " + fmt17(lhs) + ", bracket " + fmt17(bracket)});
}

HierarchyResult check_mu_hierarchy(VerificationReport& rep, const Problem& prob,
                                   const SolverOptions& opts, double rel_tol) {
  const RadialProfile& profile = *prob.profile;
  const double Rs = profile.R_star;
  const double far = 4.0 * Rs + prob.K.a2;
  const int nd = profile.dim;

  auto config1 = [&](double x0, double x1) {
    Configuration c;
    c.dim = nd;
    Point p{};
    p[0] = x0;
    if (nd > 1) p[1] = x1;
    c.points.push_back(p);
    return c;
  };

  // Ring of single-centre seeds plus the origin.
  std::vector<Configuration> seeds1{config1(0.0, 0.0)};
  const double ring = prob.K.a2 + 0.5 * Rs;
  seeds1.push_back(config1(ring, 0.0));
  seeds1.push_back(config1(-ring, 0.0));
  seeds1.push_back(config1(2.0 * ring, 0.0));
  if (nd > 1) seeds1.push_back(config1(0.0, ring));

  HierarchyResult out;
  SearchResult s1 = mu_k_search(prob, seeds1, opts);
  out.mu1 = s1.best_mu;
  out.best1 = s1.best_config;

  // Far single centre on the same grid is the m0 reference.
  Configuration cfar = config1(far, 0.0);
  out.m0_reference = minimize_mu(prob, cfar, opts).mu;

  // k = 2 seeds: best single centre paired with mirrored/far partners.
  std::vector<Configuration> seeds2;
  {
    Configuration a = s1.best_config;
    Configuration b = a;
    Point p = a.points[0];
    Point pm = p;
    for (int d = 0; d < nd; ++d) pm[d] = -p[d];
    if (dist(p, pm, nd) >= 2.0 * Rs) {
      b.points.push_back(pm);
      seeds2.push_back(b);
    }
    Configuration c = a;
    Point pf = p;
    pf[0] += std::max(2.0 * prob.params.R0, far - p[0]);
    c.points.push_back(pf);
    seeds2.push_back(c);
    Configuration e = a;
    Point pe = p;
    pe[0] -= 2.0 * prob.params.R0;
    e.points.push_back(pe);
    seeds2.push_back(e);
  }
  SearchResult s2 = mu_k_search(prob, seeds2, opts);
  out.mu2 = s2.best_mu;
  out.best2 = s2.best_config;

  const double gap = out.mu2 - (out.mu1 + out.m0_reference);
  const double tol = rel_tol * std::fabs(out.m0_reference);
  rep.add({"two-bump value over best single plus one-bump reference", gap, -tol, gap > -tol,
           tol,
           "mu2 " + fmt17(out.mu2) + ", mu1 " + fmt17(out.mu1) + ", ref " +
               fmt17(out.m0_reference)});
  return out;
}

void residual_pde(VerificationReport& rep, MinimizeResult& result, const Configuration& config,
                  const Problem& prob, double tol) {
  extract_multipliers(result, config, prob);
  double lmax = 0.0;
  for (const auto& l : result.lambdas)
    for (int d = 0; d < config.dim; ++d) lmax = std::max(lmax, std::fabs(l[d]));
  rep.add({"unprojected patch dual norm of the energy gradient", result.residual_star_xd, tol,
           result.residual_star_xd <= tol, tol, ""});
  rep.add({"largest barycenter multiplier", lmax, tol, lmax <= tol, tol, ""});
}

}  // namespace mb
