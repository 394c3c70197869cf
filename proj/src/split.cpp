#include "mb/split.hpp"

#include <cmath>
#include <queue>

#include "mb/errors.hpp"

namespace mb {

EmergingSplit emerging_split(const Field& u, const Configuration& config,
                             const ModelParams& params) {
  const Grid& g = u.grid();
  const std::size_t n = g.size();
  const double delta = params.delta;
  const int k = config.k();

  std::vector<int> owner(n, -1);  // -1 unvisited, >=0 bump index
  std::vector<std::size_t> stack;

  EmergingSplit out;
  out.u_sub = u;
  out.pieces.assign(k, make_field(u.mask));
  out.piece_cells.assign(k, {});

  for (std::size_t c0 = 0; c0 < n; ++c0) {
    if (owner[c0] >= 0 || u.v[c0] <= delta) continue;
    // Flood-fill one connected component of {u > delta}.
    std::vector<std::size_t> comp;
    stack.assign(1, c0);
    owner[c0] = k;  // provisional
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      comp.push_back(c);
      std::size_t rem = c;
      std::array<int, 3> mi{};
      for (int d = g.dim - 1; d >= 0; --d) {
        mi[d] = static_cast<int>(rem % static_cast<std::size_t>(g.dims[d]));
        rem /= static_cast<std::size_t>(g.dims[d]);
      }
      for (int ax = 0; ax < g.dim; ++ax) {
        for (int s = -1; s <= 1; s += 2) {
          const int ni = mi[ax] + s;
          if (ni < 0 || ni >= g.dims[ax]) continue;
          const std::size_t nc = c + static_cast<std::size_t>(s * g.strides[ax]);
          if (owner[nc] < 0 && u.v[nc] > delta) {
            owner[nc] = k;
            stack.push_back(nc);
          }
        }
      }
    }
    // The component must sit inside exactly one centre's rho-ball.
    int own = -1;
    for (int j = 0; j < k; ++j) {
      bool contained = true;
      for (std::size_t c : comp)
        if (dist(g.center(c), config.points[j], g.dim) >= params.rho) {
          contained = false;
          break;
        }
      if (contained) {
        own = j;
        break;
      }
    }
    if (own < 0) throw NotEmerging("emerging part leaks outside every rho-ball");
    for (std::size_t c : comp) {
      owner[c] = own;
      out.pieces[own].v[c] = u.v[c] - delta;
      out.u_sub.v[c] = delta;
      out.piece_cells[own].push_back(c);
    }
  }

  for (int j = 0; j < k; ++j)
    if (out.piece_cells[j].empty())
      throw NotEmerging("a required emerging part is identically zero");
  return out;
}

Point barycenter(const EmergingSplit& split, int i, const Configuration& config) {
  const Field& piece = split.pieces[i];
  const Grid& g = piece.grid();
  double mass = 0.0;
  Point num{};
  for (std::size_t c : split.piece_cells[static_cast<std::size_t>(i)]) {
    const double p2 = piece.v[c] * piece.v[c];
    mass += p2;
    const Point x = g.center(c);
    for (int d = 0; d < g.dim; ++d) num[d] += (x[d] - config.points[i][d]) * p2;
  }
  if (mass == 0.0) throw ZeroPiece("barycenter: emerging part has zero mass");
  Point b{};
  for (int d = 0; d < g.dim; ++d) b[d] = num[d] / mass;
  return b;
}

}  // namespace mb
