#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <vector>

#include "sepmot/grid.hpp"

namespace sepmot {

/// Ordered eigenvalues, optional (n+, n-) labels, optional continuum onset.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  std::vector<std::array<int, 2>> labels;
  std::optional<double> continuum_onset;

  /// Throws InputError if eigenvalues are not ascending or labels mismatch.
  void validate() const;
};

/// Real wavefunction samples on a 1D grid, with its quadrature norm.
struct WaveField1D {
  Grid1D grid;
  Eigen::VectorXd values;
  double norm = 0.0;
};

/// Real wavefunction samples on a 2D grid; values(ix, iX).
struct WaveField2D {
  Grid2D grid;
  Eigen::MatrixXd values;
  double norm = 0.0;
};

WaveField1D make_wavefield(const Grid1D& grid, Eigen::VectorXd values);
WaveField2D make_wavefield(const Grid2D& grid, Eigen::MatrixXd values);

/// Rescales to unit quadrature norm. Throws InputError on a zero field.
void normalize(WaveField1D& field);
void normalize(WaveField2D& field);

}  // namespace sepmot
