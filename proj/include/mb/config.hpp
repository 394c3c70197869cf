#pragma once

#include <array>
#include <vector>

namespace mb {

using Point = std::array<double, 3>;  // trailing coordinates unused below dim

// Unordered finite set of bump centres.
struct Configuration {
  int dim = 0;
  std::vector<Point> points;

  int k() const { return static_cast<int>(points.size()); }
};

double dist(const Point& a, const Point& b, int dim);

// Separation defect (2 R_star - min pairwise distance)^+; 0 for a single centre.
double sigma_of(const Configuration& c, double R_star);

// Two-sided max-min metric on unordered centre sets of equal size.
double config_dist(const Configuration& a, const Configuration& b);

}  // namespace mb
