#pragma once

#include <Eigen/Core>
#include <vector>

#include "sepmot/model.hpp"
#include "sepmot/spectrum.hpp"

namespace sepmot::gcm {

/// Generator states phi_ch(x; b_i) * (2 gamma / pi)^{1/4} exp(-gamma (X-b_i)^2)
/// with the electronic factor clamped at the generator coordinate b_i.
struct GcmBasis {
  std::vector<double> centers;  // strictly increasing
  double width = 1.0;           // the Gaussian exponent gamma
  int channel = 0;

  void validate() const;
};

struct HillWheelerKernels {
  Eigen::MatrixXd hamiltonian;
  Eigen::MatrixXd overlap;
};

/// Discretized Hill-Wheeler kernels N_ij = <i|j> and H_ij = <i|H'|j> by grid
/// quadrature on the scan's fast and slow grids. The integrals factorize over
/// the two coordinates, so each entry is an exact product of 1D quadratures.
HillWheelerKernels hill_wheeler_kernels(const GcmBasis& basis, const model::ModelSpec& spec,
                                        const model::AdiabaticScan& scan);

struct HillWheelerSolution {
  Spectrum energies;
  Eigen::MatrixXd weights;  // columns: weight vectors in the center basis
  int kept = 0;             // overlap eigenvalues surviving truncation
};

/// Generalized symmetric eigenproblem H F = E N F via canonical
/// orthogonalization; overlap eigenvalues below 1e-10 of the largest are
/// discarded (ill-conditioning is intrinsic to GCM kernels and is surfaced,
/// not hidden).
HillWheelerSolution solve_hill_wheeler(const HillWheelerKernels& kernels, int k);

}  // namespace sepmot::gcm
