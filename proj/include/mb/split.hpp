#pragma once

#include <vector>

#include "mb/grid.hpp"
#include "mb/radial.hpp"

namespace mb {

// Decomposition u = u_sub + sum of per-bump emerging parts. pieces[i] is the
// part of (u - delta)^+ owned by centre i; its support sits inside the centre's
// rho-ball and the parts reconstruct u exactly, cell by cell.
struct EmergingSplit {
  Field u_sub;
  std::vector<Field> pieces;
  std::vector<std::vector<std::size_t>> piece_cells;  // support cells per bump
};

EmergingSplit emerging_split(const Field& u, const Configuration& config,
                             const ModelParams& params);

// Normalized first moment of pieces[i]^2 about centre i.
Point barycenter(const EmergingSplit& split, int i, const Configuration& config);

}  // namespace mb
