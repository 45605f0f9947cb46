#include "sepmot/adiabatic.hpp"

#include <cmath>
#include <string>

#include "sepmot/errors.hpp"
#include "sepmot/numerics.hpp"
#include "sepmot/threading.hpp"

namespace sepmot::adiabatic {

CouplingMatrix coupling_matrix(const model::AdiabaticScan& scan) {
  const int nch = scan.n_channels();
  const int nX = scan.slow.n_points;
  if (nch < 1) throw InputError("coupling_matrix: scan has no channels");
  const double dX = scan.slow.spacing();
  const Eigen::VectorXd wx = scan.fast.trapezoid_weights();

  CouplingMatrix c;
  c.slow = scan.slow;
  c.n_channels = nch;
  c.first_order.resize(nch * nch, nX);
  c.second_order.resize(nch * nch, nX);
  c.grad_overlap.resize(nch * nch, nX);

  parallel_for(nX, [&](int j) {
    const int jl = std::max(1, std::min(j, nX - 2));
    std::vector<Eigen::VectorXd> dphi(nch), d2phi(nch);
    for (int n = 0; n < nch; ++n) {
      dphi[n] = (scan.channels[n].col(jl + 1) - scan.channels[n].col(jl - 1)) / (2.0 * dX);
      d2phi[n] = (scan.channels[n].col(jl + 1) - 2.0 * scan.channels[n].col(jl) +
                  scan.channels[n].col(jl - 1)) /
                 (dX * dX);
    }
    for (int n = 0; n < nch; ++n) {
      for (int m = 0; m < nch; ++m) {
        const Eigen::VectorXd phin = scan.channels[n].col(jl);
        c.first_order(n * nch + m, j) = wx.dot(phin.cwiseProduct(dphi[m]));
        c.second_order(n * nch + m, j) = wx.dot(phin.cwiseProduct(d2phi[m]));
        c.grad_overlap(n * nch + m, j) = wx.dot(dphi[n].cwiseProduct(dphi[m]));
      }
    }
  });
  return c;
}

double analytic_first_order(const model::ModelSpec& spec, int n, int m) {
  if (n == m - 1) return -0.5 * spec.a * std::sqrt(0.5 * m);
  if (n == m + 1) return 0.5 * spec.a * std::sqrt(0.5 * (m + 1));
  return 0.0;
}

namespace {

// Central-difference first derivative with Dirichlet ghosts dropped; the
// boundary rows keep their half-stencils so the matrix is exactly
// antisymmetric.
Eigen::MatrixXd central_difference_matrix(const Grid1D& grid) {
  const int n = grid.n_points;
  const double inv2d = 1.0 / (2.0 * grid.spacing());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) d(i, i + 1) = inv2d;
    if (i > 0) d(i, i - 1) = -inv2d;
  }
  return d;
}

}  // namespace

Eigen::MatrixXd channel_block_operator(const model::AdiabaticScan& scan,
                                       const CouplingMatrix& coupling,
                                       const model::ModelSpec& spec, ChannelMode mode) {
  const int nch = scan.n_channels();
  const int nX = scan.slow.n_points;
  if (coupling.n_channels != nch || coupling.slow.n_points != nX) {
    throw InputError("channel_block_operator: coupling does not match scan");
  }
  const double k4 = std::pow(spec.kappa, 4);
  const Eigen::MatrixXd t_nuc =
      numerics::fd_hamiltonian(scan.slow, Eigen::VectorXd::Zero(nX), k4);
  const Eigen::MatrixXd d_mat = central_difference_matrix(scan.slow);

  const int dim = nch * nX;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < nch; ++n) {
    h.block(n * nX, n * nX, nX, nX) = t_nuc;
    h.block(n * nX, n * nX, nX, nX).diagonal() += scan.energies.row(n).transpose();
  }
  if (mode != ChannelMode::diagonal_only) {
    for (int n = 0; n < nch; ++n) {
      for (int m = 0; m < nch; ++m) {
        if (mode == ChannelMode::adiabatic && n != m) continue;
        // C_nm = -kappa^4 (F d/dX + d/dX F - G); the anti-commutator form
        // keeps the assembled block symmetric even when F varies with X.
        const Eigen::MatrixXd f = coupling.first(n, m).asDiagonal();
        const Eigen::MatrixXd g = coupling.grad(n, m).asDiagonal();
        h.block(n * nX, m * nX, nX, nX) -= k4 * (f * d_mat + d_mat * f - g);
      }
    }
  }
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw AccuracyError("channel_block_operator: assembled block operator asymmetry " +
                        std::to_string(asym));
  }
  return 0.5 * (h + h.transpose());
}

ChannelSolution solve_coupled_channels(const model::AdiabaticScan& scan,
                                       const CouplingMatrix& coupling,
                                       const model::ModelSpec& spec, int k, ChannelMode mode) {
  const int nch = scan.n_channels();
  const int nX = scan.slow.n_points;
  const Eigen::MatrixXd h = channel_block_operator(scan, coupling, spec, mode);
  auto eig = numerics::eigensolve(h, k);
  ChannelSolution out;
  out.energies = std::move(eig.spectrum);
  const double inv_sqrt_d = 1.0 / std::sqrt(scan.slow.spacing());
  for (int s = 0; s < k; ++s) {
    Eigen::MatrixXd amp(nch, nX);
    for (int n = 0; n < nch; ++n) {
      amp.row(n) = eig.vectors.col(s).segment(n * nX, nX).transpose() * inv_sqrt_d;
    }
    // Quadrature norm: sum of per-channel trapezoid integrals.
    double norm = 0.0;
    const Eigen::VectorXd wX = scan.slow.trapezoid_weights();
    for (int n = 0; n < nch; ++n) norm += wX.dot(amp.row(n).cwiseAbs2().transpose());
    amp /= std::sqrt(norm);
    out.amplitudes.push_back(std::move(amp));
  }
  return out;
}

EffectiveNuclearResult effective_nuclear_hamiltonian(const model::AdiabaticScan& scan,
                                                     const model::ModelSpec& spec, int channel) {
  if (channel < 0 || channel >= scan.n_channels()) {
    throw InputError("effective_nuclear_hamiltonian: channel index out of range");
  }
  const CouplingMatrix c = coupling_matrix(scan);
  const double k4 = std::pow(spec.kappa, 4);
  const int nX = scan.slow.n_points;
  Eigen::VectorXd veff(nX);
  for (int j = 0; j < nX; ++j) {
    veff(j) = scan.energies(channel, j) + k4 * c.grad(channel, channel)(j);
  }
  EffectiveNuclearResult out;
  out.hamiltonian = numerics::fd_hamiltonian(scan.slow, veff, k4);
  auto eig = numerics::eigensolve(out.hamiltonian, 1);
  out.ground_energy = eig.spectrum.eigenvalues(0);
  WaveField1D w =
      make_wavefield(scan.slow, eig.vectors.col(0) / std::sqrt(scan.slow.spacing()));
  normalize(w);
  out.ground_state = std::move(w);
  return out;
}

}  // namespace sepmot::adiabatic
