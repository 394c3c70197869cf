#include "mb/radial.hpp"

#include <cstdio>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mb/errors.hpp"

namespace mb {

namespace {

inline double pow_qm1(double w, double qm1) { return w > 0.0 ? std::pow(w, qm1) : 0.0; }

struct Trajectory {
  std::vector<double> r, w, v;
};

enum class Shot { undershoot, overshoot, touchdown };

struct ShotResult {
  Shot kind = Shot::undershoot;
  double w_end = 0.0;
};

// Dormand-Prince 5(4) on (w, v), v = w'. The r = 0 coordinate singularity is
// stepped over with the series w(r) ~ a + (a^(q-1) - a) r^2 / (2N).
ShotResult integrate(double a, double q, int dim, double rtol, double hmax,
                     Trajectory* store) {
  const double qm1 = q - 1.0;
  const double nm1 = static_cast<double>(dim - 1);
  auto rhs = [&](double r, double w, double v, double& dw, double& dv) {
    dw = v;
    dv = -w + pow_qm1(w, qm1);
    if (nm1 > 0.0) dv -= nm1 / r * v;
  };

  const double r0 = 1e-6;
  const double c2 = (pow_qm1(a, qm1) - a) / (2.0 * dim);
  double r = r0;
  double w = a + c2 * r0 * r0;
  double v = 2.0 * c2 * r0;
  const double w_floor = 1e-13 * a;
  const double atol = rtol * a;

  if (store) {
    store->r.push_back(0.0);
    store->w.push_back(a);
    store->v.push_back(0.0);
    store->r.push_back(r);
    store->w.push_back(w);
    store->v.push_back(v);
  }

  double h = 1e-4;
  const double r_max = 100.0;
  // Butcher tableau
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  while (r < r_max) {
    h = std::min(h, hmax);
    double k1w, k1v, k2w, k2v, k3w, k3v, k4w, k4v, k5w, k5v, k6w, k6v, k7w, k7v;
    rhs(r, w, v, k1w, k1v);
    rhs(r + h * a21, w + h * a21 * k1w, v + h * a21 * k1v, k2w, k2v);
    rhs(r + h * 0.3, w + h * (a31 * k1w + a32 * k2w), v + h * (a31 * k1v + a32 * k2v), k3w, k3v);
    rhs(r + h * 0.8, w + h * (a41 * k1w + a42 * k2w + a43 * k3w),
        v + h * (a41 * k1v + a42 * k2v + a43 * k3v), k4w, k4v);
    rhs(r + h * (8.0 / 9), w + h * (a51 * k1w + a52 * k2w + a53 * k3w + a54 * k4w),
        v + h * (a51 * k1v + a52 * k2v + a53 * k3v + a54 * k4v), k5w, k5v);
    rhs(r + h, w + h * (a61 * k1w + a62 * k2w + a63 * k3w + a64 * k4w + a65 * k5w),
        v + h * (a61 * k1v + a62 * k2v + a63 * k3v + a64 * k4v + a65 * k5v), k6w, k6v);
    const double w5 = w + h * (b1 * k1w + b3 * k3w + b4 * k4w + b5 * k5w + b6 * k6w);
    const double v5 = v + h * (b1 * k1v + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v);
    rhs(r + h, w5, v5, k7w, k7v);
    const double errw = h * (e1 * k1w + e3 * k3w + e4 * k4w + e5 * k5w + e6 * k6w + e7 * k7w);
    const double errv = h * (e1 * k1v + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v + e7 * k7v);
    const double sw = atol + rtol * std::max(std::fabs(w), std::fabs(w5));
    const double sv = atol + rtol * std::max(std::fabs(v), std::fabs(v5));
    const double err = std::sqrt(0.5 * ((errw / sw) * (errw / sw) + (errv / sv) * (errv / sv)));
    if (err <= 1.0) {
      r += h;
      w = w5;
      v = v5;
      if (store) {
        store->r.push_back(r);
        store->w.push_back(w);
        store->v.push_back(v);
      }
      if (w <= 0.0) return {Shot::overshoot, w};
      if (w <= w_floor && std::fabs(v) <= w_floor) return {Shot::touchdown, w};
      if (v >= 0.0) {
        if (w > 1e3 * w_floor) return {Shot::undershoot, w};
        return {Shot::touchdown, w};
      }
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h *= fac;
    if (h < 1e-14) throw NonConvergence("radial integrator step size underflow");
  }
  throw NonConvergence("radial trajectory exceeded the radius cap");
}

double simpson_uniform(const std::vector<double>& f, double h) {
  double s = 0.0;
  std::size_t i = 0;
  for (; i + 2 < f.size(); i += 2) s += f[i] + 4.0 * f[i + 1] + f[i + 2];
  s *= h / 3.0;
  if (i + 1 < f.size()) s += 0.5 * h * (f[i] + f[i + 1]);
  return s;
}

// Quadratic least squares y ~ b0 + b1 r + b2 r^2.
void quad_fit(const std::vector<double>& rs, const std::vector<double>& ys, double out[3]) {
  double sx[5] = {0, 0, 0, 0, 0};
  double sy[3] = {0, 0, 0};
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k < 5; ++k) {
      sx[k] += p;
      if (k < 3) sy[k] += ys[i] * p;
      p *= rs[i];
    }
  }
  double m[3][4] = {{sx[0], sx[1], sx[2], sy[0]},
                    {sx[1], sx[2], sx[3], sy[1]},
                    {sx[2], sx[3], sx[4], sy[2]}};
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int rr = c + 1; rr < 3; ++rr)
      if (std::fabs(m[rr][c]) > std::fabs(m[piv][c])) piv = rr;
    std::swap(m[c], m[piv]);
    for (int rr = 0; rr < 3; ++rr) {
      if (rr == c) continue;
      const double f = m[rr][c] / m[c][c];
      for (int cc = c; cc < 4; ++cc) m[rr][cc] -= f * m[c][cc];
    }
  }
  for (int c = 0; c < 3; ++c) out[c] = m[c][3] / m[c][c];
}

}  // namespace

double sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw std::invalid_argument("sphere_area: dim must be 1, 2 or 3");
  }
}

RadialProfile solve_ground_state(double q, int dim, double tol, int nodes_per_radius) {
  if (!(q > 1.0 && q < 2.0)) throw std::invalid_argument("q must lie in (1,2)");
  if (dim < 1 || dim > 3) throw std::invalid_argument("dim must be 1, 2 or 3");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

  const double rtol = std::min(1e-11, 1e-2 * tol);
  const double hmax = 5e-3;

  // Bracket the peak value: small peaks turn around with w > 0, large peaks
  // cross zero with w' < 0.
  double lo = 1.02;
  if (integrate(lo, q, dim, rtol, hmax, nullptr).kind != Shot::undershoot)
    throw NonConvergence("could not establish an undershoot at the low bracket");
  double hi = 2.0;
  int guard = 0;
  while (integrate(hi, q, dim, rtol, hmax, nullptr).kind == Shot::undershoot) {
    hi *= 2.0;
    if (++guard > 40) throw NonConvergence("could not establish an overshoot bracket");
  }
  for (int it = 0; it < 250 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const ShotResult sr = integrate(mid, q, dim, rtol, hmax, nullptr);
    if (sr.kind == Shot::overshoot)
      hi = mid;
    else
      lo = mid;
  }

  Trajectory traj;
  const ShotResult fin = integrate(lo, q, dim, rtol, hmax, &traj);
  const double w0 = lo;
  if (fin.kind == Shot::overshoot) throw NonConvergence("final trajectory crossed zero");

  // Contact-point refinement. On the touchdown branch the local estimate
  // R_i = r_i - m w_i / w'_i of the contact radius is nearly constant, while
  // past the branch (where the bisection-limited trajectory hovers near zero)
  // it diverges. Select the branch nodes by that consistency test, then fit
  // w^((2-q)/2), which is asymptotically linear in r, with a quadratic to
  // absorb the next-order curvature; its root locates R_star.
  const double beta = 0.5 * (2.0 - q);
  const double m_exp = 2.0 / (2.0 - q);
  std::vector<double> fr, fy;
  std::size_t icut = 0;
  double w_hi_fit = 1e-4 * w0;
  for (int widen = 0; widen < 8 && fr.size() < 12; ++widen, w_hi_fit *= 10.0) {
    std::vector<std::size_t> cand;
    std::vector<double> rest;
    for (std::size_t i = 0; i < traj.r.size(); ++i) {
      if (traj.v[i] >= 0.0 || traj.w[i] > w_hi_fit || traj.w[i] < 1e-13 * w0) continue;
      cand.push_back(i);
      rest.push_back(traj.r[i] - m_exp * traj.w[i] / traj.v[i]);
    }
    if (cand.size() < 12) continue;
    std::vector<double> sorted = rest;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double R_med = sorted[sorted.size() / 2];
    fr.clear();
    fy.clear();
    for (std::size_t j = 0; j < cand.size(); ++j) {
      const std::size_t i = cand[j];
      const double gap = R_med - traj.r[i];
      if (gap <= 0.0 || std::fabs(rest[j] - R_med) > 0.3 * gap) continue;
      fr.push_back(traj.r[i]);
      fy.push_back(std::pow(traj.w[i], beta));
      icut = std::max(icut, i);
    }
  }
  if (fr.size() < 12) throw NonConvergence("too few touchdown nodes for the contact fit");
  traj.r.resize(icut + 1);
  traj.w.resize(icut + 1);
  traj.v.resize(icut + 1);
  double cfit[3];
  quad_fit(fr, fy, cfit);
  const double disc = cfit[1] * cfit[1] - 4.0 * cfit[2] * cfit[0];
  double R_star;
  if (std::fabs(cfit[2]) < 1e-14 || disc < 0.0) {
    R_star = -cfit[0] / cfit[1];
  } else {
    const double rt1 = (-cfit[1] + std::sqrt(disc)) / (2.0 * cfit[2]);
    const double rt2 = (-cfit[1] - std::sqrt(disc)) / (2.0 * cfit[2]);
    const double r_end = fr.back();
    // Pick the root just past the end of the trusted data.
    R_star = (rt1 >= r_end && (rt2 < r_end || rt1 <= rt2)) ? rt1 : rt2;
  }
  if (!(R_star > fr.back() && R_star < fr.back() + 1.0)) {
#ifdef MB_RADIAL_DEBUG
    std::fprintf(stderr,
                 "contact fit debug: R_star=%g fr_back=%g fr_front=%g n=%zu w_cut=%g w_end=%g "
                 "b0=%g b1=%g b2=%g\n",
                 R_star, fr.back(), fr.front(), fr.size(), w_cut, fin.w_end, cfit[0], cfit[1],
                 cfit[2]);
#endif
    throw NonConvergence("contact fit produced an implausible support radius");
  }
  const double slope_at = cfit[1] + 2.0 * cfit[2] * R_star;
  if (!(slope_at < 0.0)) throw NonConvergence("contact fit slope has the wrong sign");
  const double C_fit = std::pow(-slope_at, 1.0 / beta);

  RadialProfile p;
  p.q = q;
  p.dim = dim;
  p.w0 = w0;
  p.R_star = R_star;
  p.touchdown_coeff = C_fit;
  p.r_trusted = traj.r.back();

  const double h_tab = R_star / nodes_per_radius;
  const std::size_t M = static_cast<std::size_t>(std::ceil(1.1 * R_star / h_tab)) + 1;
  p.r_grid.resize(M);
  p.w_vals.assign(M, 0.0);
  p.dw_vals.assign(M, 0.0);
  std::size_t ti = 0;
  for (std::size_t i = 0; i < M; ++i) {
    const double r = i * h_tab;
    p.r_grid[i] = r;
    if (r >= R_star) continue;
    if (r <= p.r_trusted) {
      while (ti + 1 < traj.r.size() && traj.r[ti + 1] < r) ++ti;
      // Cubic Hermite on the trajectory segment (value and derivative known).
      const double ra = traj.r[ti], rb = traj.r[ti + 1];
      const double dt = rb - ra, t = (r - ra) / dt;
      const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
      const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
      p.w_vals[i] = h00 * traj.w[ti] + h10 * dt * traj.v[ti] + h01 * traj.w[ti + 1] +
                    h11 * dt * traj.v[ti + 1];
      const double g00 = 6 * t * (t - 1) / dt, g10 = (3 * t - 1) * (t - 1);
      const double g01 = -6 * t * (t - 1) / dt, g11 = t * (3 * t - 2);
      p.dw_vals[i] = g00 * traj.w[ti] + g10 * traj.v[ti] + g01 * traj.w[ti + 1] +
                     g11 * traj.v[ti + 1];
    } else {
      const double s = R_star - r;
      p.w_vals[i] = C_fit * std::pow(s, m_exp);
      p.dw_vals[i] = -m_exp * C_fit * std::pow(s, m_exp - 1.0);
    }
  }

  // Monotone-limited slopes for interpolation (the profile decreases on
  // [0, R_star]; keep the interpolant from overshooting at the splice).
  p.slopes = p.dw_vals;
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const double d = (p.w_vals[i + 1] - p.w_vals[i]) / h_tab;
    auto limit = [&](double& s) {
      if (d == 0.0)
        s = 0.0;
      else
        s = std::copysign(std::min(std::fabs(s), 3.0 * std::fabs(d)), d);
    };
    if (d <= 0.0 && p.slopes[i] > 0.0) p.slopes[i] = 0.0;
    limit(p.slopes[i]);
    limit(p.slopes[i + 1]);
  }
  p.slopes[0] = 0.0;

  p.m0 = m0_energy(p);
  return p;
}

double eval_w(const RadialProfile& p, double r) {
  if (r < 0.0) throw std::invalid_argument("eval_w: negative radius");
  if (r >= p.R_star) return 0.0;
  const double h = p.h();
  const std::size_t i = std::min(static_cast<std::size_t>(r / h), p.r_grid.size() - 2);
  const double t = (r - p.r_grid[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  const double val = h00 * p.w_vals[i] + h10 * h * p.slopes[i] + h01 * p.w_vals[i + 1] +
                     h11 * h * p.slopes[i + 1];
  return std::max(val, 0.0);
}

double eval_dw(const RadialProfile& p, double r) {
  if (r < 0.0) throw std::invalid_argument("eval_dw: negative radius");
  if (r >= p.R_star) return 0.0;
  const double h = p.h();
  const std::size_t i = std::min(static_cast<std::size_t>(r / h), p.r_grid.size() - 2);
  const double t = (r - p.r_grid[i]) / h;
  const double g00 = 6 * t * (t - 1) / h, g10 = (3 * t - 1) * (t - 1);
  const double g01 = -6 * t * (t - 1) / h, g11 = t * (3 * t - 2);
  return g00 * p.w_vals[i] + g10 * p.slopes[i] + g01 * p.w_vals[i + 1] + g11 * p.slopes[i + 1];
}

std::pair<double, double> boundary_fit(const RadialProfile& p, double sigma_fit) {
  double r_lo;
  if (sigma_fit > 0.0) {
    r_lo = p.R_star - sigma_fit;
  } else {
    // Default window: from where the profile drops to 1e-4 of the peak.
    r_lo = p.R_star;
    for (std::size_t i = 0; i < p.r_grid.size(); ++i)
      if (p.w_vals[i] <= 1e-4 * p.w0) {
        r_lo = p.r_grid[i];
        break;
      }
  }
  const double r_hi = std::min(p.r_trusted, p.R_star);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.r_grid.size(); ++i) {
    const double r = p.r_grid[i];
    if (r < r_lo || r > r_hi || p.w_vals[i] <= 0.0) continue;
    const double x = std::log(p.R_star - r);
    const double y = std::log(p.w_vals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 8) throw WindowTooCoarse("boundary_fit: fewer than 8 nodes in the fit window");
  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  const double inter = (sy - slope * sx) / dn;
  return {slope, std::exp(inter)};
}

double m0_energy(const RadialProfile& p) {
  const double h = p.h();
  std::vector<double> f(p.r_grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = p.w_vals[i], dw = p.dw_vals[i], r = p.r_grid[i];
    const double dens = 0.5 * (dw * dw - w * w) + (w > 0 ? std::pow(w, p.q) / p.q : 0.0);
    f[i] = dens * std::pow(r, p.dim - 1);
  }
  return sphere_area(p.dim) * simpson_uniform(f, h);
}

double m0_nehari_identity(const RadialProfile& p) {
  const double h = p.h();
  std::vector<double> f(p.r_grid.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = (p.w_vals[i] > 0 ? std::pow(p.w_vals[i], p.q) : 0.0) * std::pow(p.r_grid[i], p.dim - 1);
  return (1.0 / p.q - 0.5) * sphere_area(p.dim) * simpson_uniform(f, h);
}

ModelParams derive_constants(const RadialProfile& p, double sigma0_init, double a1) {
  if (!(sigma0_init > 0.0 && sigma0_init < 1.0))
    throw std::invalid_argument("sigma0_init must lie in (0,1)");
  if (!(a1 >= 1.0)) throw std::invalid_argument("a1 must be >= 1");
  double sigma0 = sigma0_init;
  while (sigma0 >= 1e-6) {
    ModelParams mp;
    mp.q = p.q;
    mp.dim = p.dim;
    mp.sigma0 = sigma0;
    mp.a1 = a1;
    mp.t_star = 0.5 * (2.0 - p.q);
    mp.rho = p.R_star - 3.0 * sigma0;
    mp.R0 = p.R_star + std::pow(sigma0, 0.5 * (2.0 - p.q));
    mp.delta = (4.0 * sigma0 < p.R_star) ? eval_w(p, p.R_star - 4.0 * sigma0) : 0.0;
    mp.k0 = static_cast<int>(std::floor(std::pow(4.0 * mp.R0 / mp.rho, p.dim))) + 1;
    bool ok = mp.rho > 0.0 && mp.delta > 0.0;
    if (ok) {
      const auto checks = verify_constants(p, mp);
      for (const auto& c : checks) ok = ok && c.pass;
    }
    if (ok) return mp;
    sigma0 *= 0.5;
  }
  throw NoAdmissibleSigma("sigma0 underflowed 1e-6 before all inequalities held");
}

std::vector<ParamCheck> verify_constants(const RadialProfile& p, const ModelParams& mp) {
  std::vector<ParamCheck> out;
  auto add = [&](const std::string& name, double lhs, double rhs) {
    out.push_back({name, lhs, rhs, lhs < rhs});
  };
  const double q = p.q;
  add("delta below sigma0 squared", mp.delta, mp.sigma0 * mp.sigma0);
  add("outer radius below (2/sqrt3) rho", mp.R0, 2.0 / std::sqrt(3.0) * mp.rho);

  // Comparison-level margin, sampled on 32 log-spaced levels.
  double worst = 1.0;  // min over samples of lhs - rhs margin sign
  double wl = 0.0, wr = 0.0;
  for (int i = 0; i < 32; ++i) {
    const double kappa = mp.delta * std::pow(1e-3, 1.0 - (i + 1) / 32.0);
    const double arg = p.R_star * p.R_star / (p.R_star + std::pow(kappa, (2.0 - q) / 3.0));
    const double lhs = eval_w(p, arg);
    const double rhs = 2.0 * kappa;
    if (lhs - rhs < worst) {
      worst = lhs - rhs;
      wl = lhs;
      wr = rhs;
    }
  }
  out.push_back({"comparison level margin (worst sampled kappa)", wr, wl, worst > 0.0});

  const double e1 = std::pow(2.0 * p.R_star / ((p.R_star + 1.0) * (p.R_star + 1.0) * mp.a1),
                             3.0 / (2.0 * (2.0 - q)));
  const double e2 = std::pow(mp.t_star / mp.a1, 1.0 / (2.0 - q));
  const double e3 = std::pow(0.5 * (q - 1.0), 1.0 / (2.0 - q));
  add("delta below the level cap", mp.delta, std::min({e1, e2, e3}));
  // Outer-region convexity margin; implied by the cap when t_star <= q-1,
  // binding only for q < 4/3.
  add("delta below the convexity margin", std::pow(mp.delta, 2.0 - q), (q - 1.0) / mp.a1);
  add("neighbour cap below its dimensional bound", static_cast<double>(mp.k0),
      std::pow(8.0 / std::sqrt(3.0), p.dim) + 1.0);
  return out;
}

double max_ode_residual(const RadialProfile& p, double r_lo, double r_hi) {
  const double h = p.h();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < p.r_grid.size(); ++i) {
    const double r = p.r_grid[i];
    if (r < r_lo || r > r_hi) continue;
    const double wpp = (p.w_vals[i + 1] - 2.0 * p.w_vals[i] + p.w_vals[i - 1]) / (h * h);
    const double wp = (p.w_vals[i + 1] - p.w_vals[i - 1]) / (2.0 * h);
    const double res =
        wpp + (p.dim - 1) / r * wp + p.w_vals[i] - pow_qm1(p.w_vals[i], p.q - 1.0);
    worst = std::max(worst, std::fabs(res));
  }
  return worst;
}

}  // namespace mb
