#pragma once

#include <Eigen/Core>
#include <functional>

#include "sepmot/grid.hpp"
#include "sepmot/spectrum.hpp"

namespace sepmot::numerics {

/// Second-order central-difference Hamiltonian -c d^2/dx^2 + diag(V) with
/// Dirichlet walls. The potential is sampled on the grid points.
Eigen::MatrixXd fd_hamiltonian(const Grid1D& grid, const Eigen::VectorXd& potential,
                               double kinetic_coef);

/// 2D version on the product grid; row index = ix * n_slow + iX.
/// Dense assembly is capped (the matrix is n^2 in the grid size); use the
/// matrix-free apply below for anything large.
Eigen::MatrixXd fd_hamiltonian(const Grid2D& grid, const Eigen::MatrixXd& potential,
                               double coef_fast, double coef_slow,
                               int dense_dim_cap = 6000);

/// Matrix-free apply of the 2D FD Hamiltonian to a field stored (ix, iX).
Eigen::MatrixXd apply_fd_hamiltonian(const Grid2D& grid, const Eigen::MatrixXd& potential,
                                     double coef_fast, double coef_slow,
                                     const Eigen::MatrixXd& field);

struct EigenResult {
  Spectrum spectrum;
  /// Columns are Euclidean-orthonormal eigenvectors; the first component of
  /// largest magnitude in each column is made positive.
  Eigen::MatrixXd vectors;
};

/// k lowest eigenpairs of a dense symmetric matrix. Rejects matrices whose
/// relative asymmetry exceeds 1e-10.
EigenResult eigensolve(const Eigen::MatrixXd& matrix, int k);

/// Eigenvalues only (all of them), ascending.
Eigen::VectorXd eigenvalues_only(const Eigen::MatrixXd& matrix);

/// Number of eigenvalues of a symmetric tridiagonal matrix below `bound`,
/// by Sturm sequence count. diag has size n, offdiag size n-1.
int tridiagonal_count_below(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                            double bound);

/// Normalized harmonic-oscillator eigenfunction value, evaluated by upward
/// recurrence: scale^{-1/2} h_n(x/scale) with h_n the eigenfunctions of
/// -d^2/du^2 + u^2. Supports n <= 200.
double hermite_function(int n, double scale, double x);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Action integral J(E) = 2 int sqrt(E - V) dq between the classical turning
/// points of a single well contained in [q_lo, q_hi].
double action_integral(const std::function<double(double)>& potential, double energy,
                       double q_lo, double q_hi);

/// Solves J(E) = n * h_action for E by bisection. The potential must have a
/// single well on [q_lo, q_hi].
double sommerfeld_quantize(const std::function<double(double)>& potential, int n,
                           double h_action, double q_lo, double q_hi);

}  // namespace sepmot::numerics
