#include "sepmot/partitioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "sepmot/errors.hpp"
#include "sepmot/numerics.hpp"

namespace sepmot::partitioning {

PartitionScheme::PartitionScheme(Eigen::MatrixXd m, std::vector<int> p)
    : matrix(std::move(m)), p_indices(std::move(p)) {
  if (matrix.rows() != matrix.cols()) throw InputError("PartitionScheme: matrix not square");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InputError("PartitionScheme: matrix not symmetric");
  }
  if (p_indices.empty()) throw InputError("PartitionScheme: empty model space");
  std::set<int> seen;
  for (int i : p_indices) {
    if (i < 0 || i >= dimension()) throw InputError("PartitionScheme: index out of range");
    if (!seen.insert(i).second) throw InputError("PartitionScheme: duplicate index");
  }
}

std::vector<int> PartitionScheme::q_indices() const {
  std::set<int> p(p_indices.begin(), p_indices.end());
  std::vector<int> q;
  for (int i = 0; i < dimension(); ++i) {
    if (!p.count(i)) q.push_back(i);
  }
  return q;
}

namespace {

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd effective_operator(const PartitionScheme& scheme, double energy) {
  const auto q = scheme.q_indices();
  const Eigen::MatrixXd php = submatrix(scheme.matrix, scheme.p_indices, scheme.p_indices);
  if (q.empty()) return php;  // P covers the full space

  const Eigen::MatrixXd phq = submatrix(scheme.matrix, scheme.p_indices, q);
  const Eigen::MatrixXd qhq = submatrix(scheme.matrix, q, q);
  // Resolvent through the QHQ eigenbasis: stable and gives the pole check.
  auto eig = numerics::eigensolve(qhq, static_cast<int>(q.size()));
  const Eigen::VectorXd& d = eig.spectrum.eigenvalues;
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (std::abs(energy - d(i)) < 1e-10 * scale) {
      throw PoleError("effective_operator: E within 1e-10 of QHQ eigenvalue " +
                      std::to_string(d(i)));
    }
  }
  const Eigen::MatrixXd coupling = phq * eig.vectors;  // P x q
  Eigen::MatrixXd heff = php;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    heff += coupling.col(i) * coupling.col(i).transpose() / (energy - d(i));
  }
  return 0.5 * (heff + heff.transpose());
}

PartitionedSolve solve_partitioned(const PartitionScheme& scheme, int branch, double e0) {
  const int p_dim = static_cast<int>(scheme.p_indices.size());
  if (branch < 0 || branch >= p_dim) {
    throw InputError("solve_partitioned: branch outside the model space");
  }
  PartitionedSolve out;
  double e = e0;
  constexpr int max_iter = 500;
  constexpr double tol = 1e-10;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXd heff = effective_operator(scheme, e);
    const Eigen::VectorXd lam = numerics::eigenvalues_only(heff);
    const double target = lam(branch);
    const double next = e + 0.5 * (target - e);
    out.trace.push_back(next);
    out.iterations = it + 1;
    if (std::abs(next - e) < tol * std::max(1.0, std::abs(next))) {
      e = next;
      converged = true;
      break;
    }
    e = next;
  }
  if (!converged) {
    throw IterationError("solve_partitioned: no convergence in 500 iterations; last E = " +
                         std::to_string(e));
  }
  // A converged energy must be an eigenvalue of the full matrix.
  const Eigen::VectorXd full = numerics::eigenvalues_only(scheme.matrix);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < full.size(); ++i) best = std::min(best, std::abs(full(i) - e));
  if (best > 1e-8 * std::max(1.0, std::abs(e))) {
    throw AccuracyError("solve_partitioned: converged E " + std::to_string(e) +
                        " is not an eigenvalue of the full matrix (residual " +
                        std::to_string(best) + ")");
  }
  out.energy = e;
  return out;
}

}  // namespace sepmot::partitioning
