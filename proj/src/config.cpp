#include "mb/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mb/errors.hpp"

namespace mb {

double dist(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

double sigma_of(const Configuration& c, double R_star) {
  if (c.k() <= 1) return 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < c.k(); ++i)
    for (int j = i + 1; j < c.k(); ++j) dmin = std::min(dmin, dist(c.points[i], c.points[j], c.dim));
  return std::max(2.0 * R_star - dmin, 0.0);
}

double config_dist(const Configuration& a, const Configuration& b) {
  if (a.k() != b.k()) throw SizeMismatch("config_dist: centre counts differ");
  auto one_sided = [&](const Configuration& u, const Configuration& v) {
    double worst = 0.0;
    for (const auto& p : u.points) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& r : v.points) best = std::min(best, dist(p, r, u.dim));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return one_sided(a, b) + one_sided(b, a);
}

}  // namespace mb
