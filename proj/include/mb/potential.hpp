#pragma once

#include <string>
#include <vector>

#include "mb/grid.hpp"

namespace mb {

// Parametric potential families. All are bounded by a1, tend to 1 at infinity,
// and have a bounded (possibly empty) region where K >= 1.
struct Potential {
  enum class Kind { unit, radial_dip, compact_bump };
  Kind kind = Kind::unit;
  double alpha = 0.0;  // amplitude of K - 1
  double a1 = 1.0;     // cap
  double a2 = 0.0;     // K < 1 outside B(0, a2)

  double operator()(const Point& x, int dim) const;
};

Potential potential_make(Potential::Kind kind, double alpha);
Potential::Kind potential_kind_from(const std::string& name);
std::string potential_kind_name(Potential::Kind kind);

std::vector<double> sample_potential(const Potential& K, const Grid& grid);

// Sampled sup over ball centres (stride R_star/2) of ||K-1||_{L^p(B(c,1))},
// with p = dim.
double ploc_norm_estimate(const Potential& K, const Grid& grid, double R_star);

}  // namespace mb
