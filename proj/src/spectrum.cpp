#include "sepmot/spectrum.hpp"

#include <cmath>

#include "sepmot/errors.hpp"

namespace sepmot {

void Spectrum::validate() const {
  for (Eigen::Index i = 1; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) < eigenvalues(i - 1)) {
      throw InputError("Spectrum: eigenvalues not ascending");
    }
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != eigenvalues.size()) {
    throw InputError("Spectrum: label count does not match eigenvalue count");
  }
}

WaveField1D make_wavefield(const Grid1D& grid, Eigen::VectorXd values) {
  if (values.size() != grid.n_points) throw InputError("WaveField1D: size mismatch");
  WaveField1D f{grid, std::move(values), 0.0};
  f.norm = trapezoid(grid, f.values.cwiseAbs2());
  return f;
}

WaveField2D make_wavefield(const Grid2D& grid, Eigen::MatrixXd values) {
  if (values.rows() != grid.fast.n_points || values.cols() != grid.slow.n_points) {
    throw InputError("WaveField2D: shape mismatch");
  }
  WaveField2D f{grid, std::move(values), 0.0};
  f.norm = trapezoid(grid, f.values.cwiseAbs2().eval());
  return f;
}

void normalize(WaveField1D& field) {
  if (field.norm <= 0.0) throw InputError("normalize: zero field");
  field.values /= std::sqrt(field.norm);
  field.norm = 1.0;
}

void normalize(WaveField2D& field) {
  if (field.norm <= 0.0) throw InputError("normalize: zero field");
  field.values /= std::sqrt(field.norm);
  field.norm = 1.0;
}

}  // namespace sepmot
