#pragma once

#include <Eigen/Core>
#include <vector>

namespace sepmot::partitioning {

/// Model-space split of a finite symmetric matrix: P projects onto the index
/// set p_indices, Q onto its complement.
struct PartitionScheme {
  Eigen::MatrixXd matrix;
  std::vector<int> p_indices;

  PartitionScheme(Eigen::MatrixXd m, std::vector<int> p);

  int dimension() const { return static_cast<int>(matrix.rows()); }
  std::vector<int> q_indices() const;
};

/// Energy-dependent effective operator on the model space:
///   H_eff(E) = PHP + PHQ (E - QHQ)^{-1} QHP.
/// Throws PoleError if E sits within 1e-10 (relative) of a QHQ eigenvalue.
Eigen::MatrixXd effective_operator(const PartitionScheme& scheme, double energy);

struct PartitionedSolve {
  double energy = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // energy after each update
};

/// Damped fixed-point iteration E <- E + 0.5 (eig_branch(H_eff(E)) - E) to
/// tolerance 1e-10, at most 500 iterations. The converged energy is verified
/// to be an eigenvalue of the full matrix within 1e-8.
PartitionedSolve solve_partitioned(const PartitionScheme& scheme, int branch, double e0);

}  // namespace sepmot::partitioning
