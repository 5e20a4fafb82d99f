#pragma once

#include <Eigen/Core>

namespace clumplab {

// Uniform grid x_j = start + j * step, j = 0..count-1.
struct Grid {
  double start = 0.0;
  double step = 1.0;
  Eigen::Index count = 2;

  double point(Eigen::Index j) const { return start + static_cast<double>(j) * step; }
  double end() const { return point(count - 1); }
  double span() const { return static_cast<double>(count - 1) * step; }
  Eigen::VectorXd points() const;

  // Trapezoid weights: step in the interior, step/2 at both ends.
  Eigen::VectorXd trapezoid_weights() const;

  bool operator==(const Grid& other) const = default;
};

Grid make_grid(double start, double step, Eigen::Index count);

// Grid with the given step covering [lo, hi]; the last point is the first one >= hi.
Grid grid_covering(double lo, double hi, double step);

}  // namespace clumplab
