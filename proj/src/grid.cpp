#include "sepmot/grid.hpp"

#include <cmath>
#include <string>

#include "sepmot/errors.hpp"

namespace sepmot {

Grid1D::Grid1D(double xmin, double xmax, int n) : x_min(xmin), x_max(xmax), n_points(n) {
  if (!(x_max > x_min)) {
    throw InputError("Grid1D: x_max must exceed x_min");
  }
  if (n_points < 8) {
    throw InputError("Grid1D: need at least 8 points, got " + std::to_string(n_points));
  }
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw InputError("Grid1D: bounds must be finite");
  }
}

Eigen::VectorXd Grid1D::points() const {
  Eigen::VectorXd x(n_points);
  const double d = spacing();
  for (int i = 0; i < n_points; ++i) x(i) = x_min + i * d;
  return x;
}

Eigen::VectorXd Grid1D::trapezoid_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n_points, spacing());
  w(0) *= 0.5;
  w(n_points - 1) *= 0.5;
  return w;
}

Grid2D::Grid2D(Grid1D fast_grid, Grid1D slow_grid, std::size_t point_cap)
    : fast(fast_grid), slow(slow_grid) {
  if (size() > point_cap) {
    throw ResourceError("Grid2D: " + std::to_string(size()) + " points exceeds cap of " +
                        std::to_string(point_cap));
  }
}

double trapezoid(const Grid1D& grid, const Eigen::VectorXd& f) {
  if (f.size() != grid.n_points) throw InputError("trapezoid: size mismatch");
  return grid.trapezoid_weights().dot(f);
}

double trapezoid(const Grid2D& grid, const Eigen::MatrixXd& f) {
  if (f.rows() != grid.fast.n_points || f.cols() != grid.slow.n_points) {
    throw InputError("trapezoid: field shape does not match grid");
  }
  const Eigen::VectorXd wx = grid.fast.trapezoid_weights();
  const Eigen::VectorXd wX = grid.slow.trapezoid_weights();
  return wx.transpose() * f * wX;
}

}  // namespace sepmot
