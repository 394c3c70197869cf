#include "mb/energy.hpp"

#include <algorithm>
#include <cmath>

#include "mb/errors.hpp"
#include "mb/kernels.hpp"

namespace mb {

namespace {

double dirichlet_energy(const Field& u) {
  const Grid& g = u.grid();
  const std::size_t n = g.size();
  std::vector<double> lap(n);
  helmholtz_apply(g, u.mask->inside01.data(), u.v.data(), lap.data(), 0.0);
  return 0.5 * kernels::active().dot(u.v.data(), lap.data(), n) * g.cell_volume();
}

}  // namespace

double energy(const Field& u, const std::vector<double>& Kvals, double q) {
  const std::size_t n = u.v.size();
  const double vol = u.cell_volume();
  double quad = 0.0, power = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const double uc = u.v[c];
    if (uc == 0.0) continue;
    quad += Kvals[c] * uc * uc;
    power += std::pow(uc, q);
  }
  return dirichlet_energy(u) - 0.5 * quad * vol + power * vol / q;
}

double j_delta(const Field& piece, const std::vector<double>& Kvals, const ModelParams& mp) {
  const std::size_t n = piece.v.size();
  const double vol = piece.cell_volume();
  const double q = mp.q, delta = mp.delta;
  double quad = 0.0, lin = 0.0, power = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const double v = piece.v[c];
    if (v <= 0.0) continue;
    quad += Kvals[c] * v * v;
    lin += Kvals[c] * v;
    power += std::pow(delta + v, q) - std::pow(delta, q);
  }
  return dirichlet_energy(piece) - 0.5 * quad * vol - delta * lin * vol + power * vol / q;
}

Field grad_energy(const Field& u, const std::vector<double>& Kvals, double q) {
  const Grid& g = u.grid();
  const std::size_t n = g.size();
  Field out = make_field(u.mask);
  helmholtz_apply(g, u.mask->inside01.data(), u.v.data(), out.v.data(), 0.0);
  const double qm1 = q - 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    const double uc = u.v[c];
    if (uc > 0.0)
      out.v[c] += -Kvals[c] * uc + std::pow(uc, qm1);
  }
  return out;
}

double nehari_scale(const EmergingSplit& split, int i, const std::vector<double>& Kvals,
                    const ModelParams& mp) {
  const Field& piece = split.pieces[static_cast<std::size_t>(i)];
  const auto& cells = split.piece_cells[static_cast<std::size_t>(i)];
  const double vol = piece.cell_volume();
  const double q = mp.q, delta = mp.delta;

  double quad = 0.0, klin = 0.0;
  for (std::size_t c : cells) {
    quad += Kvals[c] * piece.v[c] * piece.v[c];
    klin += Kvals[c] * piece.v[c];
  }
  const double Q = 2.0 * dirichlet_energy(piece) - quad * vol;
  if (!(Q < 0.0))
    throw HypothesisViolated("nehari_scale: nonnegative quadratic form on the piece");
  const double lin = delta * klin * vol;

  auto fval = [&](double t) {
    double s = 0.0;
    for (std::size_t c : cells) s += std::pow(delta + t * piece.v[c], q - 1.0) * piece.v[c];
    return t * Q + s * vol - lin;
  };
  auto fder = [&](double t) {
    double s = 0.0;
    for (std::size_t c : cells)
      s += std::pow(delta + t * piece.v[c], q - 2.0) * piece.v[c] * piece.v[c];
    return Q + (q - 1.0) * s * vol;
  };

  if (!(fval(0.0) > 0.0))
    throw HypothesisViolated("nehari_scale: derivative not positive at t = 0");
  double hi = 1.0;
  while (fval(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw NoRoot("nehari_scale: bracket expansion exceeded 1e6");
  }
  double lo = hi * 0.5 < 1e-12 ? 0.0 : hi * 0.5;
  if (fval(lo) <= 0.0) lo = 0.0;

  // Newton from the bracket midpoint, falling back to bisection whenever the
  // step leaves [lo, hi].
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = fval(t);
    if (f > 0.0)
      lo = t;
    else
      hi = t;
    if (hi - lo <= 1e-14 * hi) break;
    const double d = fder(t);
    double tn = (d != 0.0) ? t - f / d : 0.5 * (lo + hi);
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (std::fabs(tn - t) <= 1e-15 * t) {
      t = tn;
      break;
    }
    t = tn;
  }
  return t;
}

double overlap_defect(const Configuration& config, const RadialProfile& profile,
                      const ModelParams& mp, double r_exp) {
  const int k = config.k();
  const int nd = config.dim;
  const double Rs = profile.R_star;
  std::vector<double> acc(k, 0.0);
  const bool sup_norm = !(r_exp > 0.0);

  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double dij = dist(config.points[i], config.points[j], nd);
      if (dij >= 2.0 * Rs) continue;
      const double sig = 2.0 * Rs - dij;
      const double hf = std::min(sig / 8.0, Rs / 64.0);
      // Bounding box of the overlap lens.
      Point lo{}, hi{};
      for (int d = 0; d < nd; ++d) {
        lo[d] = std::max(config.points[i][d], config.points[j][d]) - Rs;
        hi[d] = std::min(config.points[i][d], config.points[j][d]) + Rs;
      }
      std::array<int, 3> cnt{1, 1, 1};
      for (int d = 0; d < nd; ++d) cnt[d] = std::max(1, static_cast<int>((hi[d] - lo[d]) / hf) + 1);
      double volf = 1.0;
      for (int d = 0; d < nd; ++d) volf *= hf;

      std::array<int, 3> it{0, 0, 0};
      for (;;) {
        Point x{};
        for (int d = 0; d < nd; ++d) x[d] = lo[d] + (it[d] + 0.5) * hf;
        // Membership set of covering bumps; attribute the cell to the
        // lexicographically first covering pair so chains are not double counted.
        int first = -1, second = -1;
        double S = 0.0, T = 0.0;
        for (int m = 0; m < k; ++m) {
          const double r = dist(x, config.points[m], nd);
          if (r < Rs) {
            if (first < 0)
              first = m;
            else if (second < 0)
              second = m;
            const double wv = eval_w(profile, r);
            S += wv;
            T += std::pow(wv, mp.q - 1.0);
          }
        }
        if (second >= 0 && first == i && second == j) {
          const double hval = std::pow(S, mp.q - 1.0) - T;
          for (int m = 0; m < k; ++m) {
            if (dist(x, config.points[m], nd) >= 2.0 * mp.R0) continue;
            if (sup_norm)
              acc[m] = std::max(acc[m], std::fabs(hval));
            else
              acc[m] += std::pow(std::fabs(hval), r_exp) * volf;
          }
        }
        int d = nd - 1;
        for (; d >= 0; --d) {
          if (++it[d] < cnt[d]) break;
          it[d] = 0;
        }
        if (d < 0) break;
      }
    }
  }
  double worst = 0.0;
  for (int m = 0; m < k; ++m)
    worst = std::max(worst, sup_norm ? acc[m] : std::pow(acc[m], 1.0 / r_exp));
  return worst;
}

Field comparison_field(const Configuration& config, double kappa, const RadialProfile& profile,
                       std::shared_ptr<const DomainMask> mask) {
  if (!(kappa > 0.0)) throw std::invalid_argument("comparison_field: kappa must be positive");
  const double t_kappa =
      profile.R_star / (profile.R_star + std::pow(kappa, (2.0 - profile.q) / 3.0));
  Field f = make_field(std::move(mask));
  const Grid& g = f.grid();
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!f.mask->inside[c]) continue;
    const Point x = g.center(c);
    double s = 0.0;
    for (const auto& p : config.points) s += eval_w(profile, t_kappa * dist(x, p, g.dim));
    f.v[c] = 0.5 * s;
  }
  return f;
}

EnergyReport energy_report(const Field& u, const EmergingSplit& split,
                           const std::vector<double>& Kvals, const ModelParams& mp,
                           const DomainMask& mask) {
  EnergyReport rep;
  rep.I_value = energy(u, Kvals, mp.q);
  const std::vector<double> ones(u.v.size(), 1.0);
  rep.Iinf_value = energy(u, ones, mp.q);
  const Field g = grad_energy(u, Kvals, mp.q);
  const double vol = u.cell_volume();
  const auto& K = kernels::active();
  for (int i = 0; i < static_cast<int>(split.pieces.size()); ++i) {
    rep.Jdelta_per_bump.push_back(j_delta(split.pieces[i], Kvals, mp));
    rep.nehari_residuals.push_back(
        K.dot(g.v.data(), split.pieces[i].v.data(), u.v.size()) * vol);
  }
  rep.grad_dual_norm = dual_norm_patch_max(mask, g.v);
  return rep;
}

}  // namespace mb
