#pragma once

#include <Eigen/Core>
#include <cstddef>

namespace sepmot {

/// Uniform 1D real-space grid with Dirichlet (hard wall) endpoints.
struct Grid1D {
  double x_min = -1.0;
  double x_max = 1.0;
  int n_points = 8;

  Grid1D() = default;
  Grid1D(double xmin, double xmax, int n);

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  double point(int i) const { return x_min + i * spacing(); }
  Eigen::VectorXd points() const;

  /// Trapezoid-rule quadrature weights (half weight at the walls).
  Eigen::VectorXd trapezoid_weights() const;
};

/// Product grid: fast coordinate x times slow coordinate X.
struct Grid2D {
  Grid1D fast;
  Grid1D slow;

  Grid2D() = default;
  Grid2D(Grid1D fast_grid, Grid1D slow_grid, std::size_t point_cap = default_point_cap);

  static constexpr std::size_t default_point_cap = 4000000;

  std::size_t size() const {
    return static_cast<std::size_t>(fast.n_points) * static_cast<std::size_t>(slow.n_points);
  }
};

/// Trapezoid integral of f sampled on the grid.
double trapezoid(const Grid1D& grid, const Eigen::VectorXd& f);

/// Trapezoid integral over a 2D field stored as values(ix, iX).
double trapezoid(const Grid2D& grid, const Eigen::MatrixXd& f);

}  // namespace sepmot
