#pragma once

#include <Eigen/Core>
#include <vector>

#include "sepmot/model.hpp"
#include "sepmot/spectrum.hpp"

namespace sepmot::adiabatic {

/// Derivative couplings between adiabatic channel functions over the slow
/// grid. first_order(n,m) holds <phi_n | d/dX phi_m>, second_order the
/// corresponding second derivative, grad_overlap <d phi_n | d phi_m>.
struct CouplingMatrix {
  Grid1D slow;
  int n_channels = 0;
  Eigen::MatrixXd first_order;   // (n_channels^2, nX), row n*n_channels+m
  Eigen::MatrixXd second_order;  // same layout
  Eigen::MatrixXd grad_overlap;  // same layout

  Eigen::VectorXd first(int n, int m) const { return first_order.row(n * n_channels + m); }
  Eigen::VectorXd second(int n, int m) const { return second_order.row(n * n_channels + m); }
  Eigen::VectorXd grad(int n, int m) const { return grad_overlap.row(n * n_channels + m); }
};

/// Central-difference derivative couplings projected by fast-grid quadrature.
/// Interior points use the symmetric stencil; the two edge points copy their
/// neighbours (they sit under the vanishing tail of the nuclear functions).
CouplingMatrix coupling_matrix(const model::AdiabaticScan& scan);

/// Closed-form first-order coupling for the harmonic model:
/// F_nm = -(a/2) (sqrt(m/2) delta_{n,m-1} - sqrt((m+1)/2) delta_{n,m+1}).
double analytic_first_order(const model::ModelSpec& spec, int n, int m);

/// Which coupling blocks enter the coupled-channel operator.
///  diagonal_only: potential diagonal only, no derivative coupling (crude
///                 Born-Oppenheimer product ansatz);
///  adiabatic:     adds the diagonal derivative-coupling term (adiabatic
///                 approximation);
///  full:          all coupling blocks.
enum class ChannelMode { diagonal_only, adiabatic, full };

struct ChannelSolution {
  Spectrum energies;
  /// Per state: channel amplitudes (n_channels, nX), quadrature-normalized so
  /// that sum_n int |amplitude_n|^2 dX = 1.
  std::vector<Eigen::MatrixXd> amplitudes;
};

/// Assembled coupled-channel block operator T_N + E_n(X) delta_nm + C_nm with
/// T_N = kappa^4 (-d^2/dX^2); block row/col n covers indices [n*nX, (n+1)*nX).
/// The first-derivative coupling is assembled in the manifestly symmetric
/// form F d/dX + d/dX F - G, which equals 2F d/dX + S for exact couplings.
Eigen::MatrixXd channel_block_operator(const model::AdiabaticScan& scan,
                                       const CouplingMatrix& coupling,
                                       const model::ModelSpec& spec, ChannelMode mode);

/// Diagonalizes the block operator for the k lowest states.
ChannelSolution solve_coupled_channels(const model::AdiabaticScan& scan,
                                       const CouplingMatrix& coupling,
                                       const model::ModelSpec& spec, int k, ChannelMode mode);

struct EffectiveNuclearResult {
  Eigen::MatrixXd hamiltonian;  // dense operator on the X grid
  double ground_energy = 0.0;
  WaveField1D ground_state;
};

/// Single-channel effective nuclear Hamiltonian
///   kappa^4 (-d^2/dX^2) + E_m(X) + kappa^4 <d phi_m | d phi_m>(X);
/// its ground eigenvalue is a Rayleigh-Ritz upper bound on the exact ground
/// energy.
EffectiveNuclearResult effective_nuclear_hamiltonian(const model::AdiabaticScan& scan,
                                                     const model::ModelSpec& spec, int channel);

}  // namespace sepmot::adiabatic
