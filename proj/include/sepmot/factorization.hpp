#pragma once

#include <Eigen/Core>
#include <vector>

#include "sepmot/model.hpp"
#include "sepmot/spectrum.hpp"

namespace sepmot::factorization {

/// Hunter factorization psi(x,X) = chi(X) phi(x|X) of a normalized 2D state.
/// chi is the non-negative marginal amplitude; phi is defined only where chi
/// exceeds the mask threshold (quasi-nodes are masked, not regularized).
struct Factorization {
  Grid2D grid;
  WaveField1D chi;           // on the slow grid, chi >= 0
  Eigen::MatrixXd phi;       // (nx, nX); columns at unmasked X are zero
  std::vector<char> mask;    // per X point: 1 where chi > eps * max(chi)
};

Factorization hunter_factorize(const WaveField2D& psi, double eps_rel = 1e-6);

enum class PotentialVariant { full_internal, clamped_only };

/// Exact potential U(X) = int phi (H phi) dx on masked points, with the full
/// internal Hamiltonian or its clamped part. Points whose X-derivative
/// stencil crosses the mask boundary are emitted as NaN, not as failures.
Eigen::VectorXd exact_potential(const Factorization& fact, const model::ModelSpec& spec,
                                PotentialVariant variant = PotentialVariant::full_internal);

/// Spike locations: masked local maxima of U - E_0(X) that exceed 5 times the
/// median absolute deviation over the masked region. Needs >= 10 valid points.
std::vector<double> detect_spikes(const Eigen::VectorXd& potential,
                                  const std::vector<char>& mask,
                                  const model::AdiabaticScan& baseline);

struct EnergyDecomposition {
  double chi_kinetic = 0.0;    // kappa^4 int |dchi/dX|^2 dX
  double potential_term = 0.0; // int chi^2 U dX over masked, finite points
};

/// For the separable case these two add up to the eigenvalue; in general the
/// remainder is the cross-derivative term.
EnergyDecomposition energy_decomposition(const Factorization& fact,
                                         const Eigen::VectorXd& potential,
                                         const model::ModelSpec& spec);

}  // namespace sepmot::factorization
