#include "clumplab/grid.hpp"

#include <cmath>
#include <string>

#include "clumplab/error.hpp"

namespace clumplab {

Eigen::VectorXd Grid::points() const {
  Eigen::VectorXd p(count);
  for (Eigen::Index j = 0; j < count; ++j) p[j] = point(j);
  return p;
}

Eigen::VectorXd Grid::trapezoid_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(count, step);
  w[0] *= 0.5;
  w[count - 1] *= 0.5;
  return w;
}

Grid make_grid(double start, double step, Eigen::Index count) {
  if (!(step > 0.0) || !std::isfinite(step)) fail(ErrorKind::invalid_argument, "grid step must be positive");
  if (count < 2) fail(ErrorKind::invalid_argument, "grid needs at least 2 points, got " + std::to_string(count));
  if (!std::isfinite(start)) fail(ErrorKind::invalid_argument, "grid start must be finite");
  return {start, step, count};
}

Grid grid_covering(double lo, double hi, double step) {
  const auto n = static_cast<Eigen::Index>(std::ceil((hi - lo) / step - 1e-9)) + 1;
  return make_grid(lo, step, std::max<Eigen::Index>(n, 2));
}

}  // namespace clumplab
