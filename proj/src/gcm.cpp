#include "sepmot/gcm.hpp"

#include <cmath>
#include <string>

#include "sepmot/errors.hpp"
#include "sepmot/numerics.hpp"
#include "sepmot/threading.hpp"

namespace sepmot::gcm {

void GcmBasis::validate() const {
  if (centers.empty()) throw InputError("GcmBasis: no centers");
  for (std::size_t i = 1; i < centers.size(); ++i) {
    if (!(centers[i] > centers[i - 1])) {
      throw InputError("GcmBasis: centers must be strictly increasing");
    }
  }
  if (!(width > 0.0)) throw InputError("GcmBasis: width must be positive");
  if (channel < 0) throw InputError("GcmBasis: negative channel");
}

namespace {

Eigen::VectorXd apply_fd_1d(const Grid1D& grid, const Eigen::VectorXd& potential, double coef,
                            const Eigen::VectorXd& f) {
  const int n = grid.n_points;
  const double c = coef / (grid.spacing() * grid.spacing());
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const double lap = (i > 0 ? f(i - 1) : 0.0) - 2.0 * f(i) + (i + 1 < n ? f(i + 1) : 0.0);
    out(i) = -c * lap + potential(i) * f(i);
  }
  return out;
}

}  // namespace

HillWheelerKernels hill_wheeler_kernels(const GcmBasis& basis, const model::ModelSpec& spec,
                                        const model::AdiabaticScan& scan) {
  basis.validate();
  spec.validate();
  if (basis.channel >= scan.n_channels()) {
    throw InputError("hill_wheeler_kernels: basis channel not present in the scan");
  }
  const int m = static_cast<int>(basis.centers.size());
  const Grid1D& xg = scan.fast;
  const Grid1D& Xg = scan.slow;
  const Eigen::VectorXd x = xg.points();
  const Eigen::VectorXd X = Xg.points();
  const Eigen::VectorXd wx = xg.trapezoid_weights();
  const Eigen::VectorXd wX = Xg.trapezoid_weights();
  const double gamma = basis.width;
  const double k4 = std::pow(spec.kappa, 4);

  // Electronic factors clamped at each center, and slow Gaussians.
  Eigen::MatrixXd fx(xg.n_points, m), gX(Xg.n_points, m);
  const double gnorm = std::pow(2.0 * gamma / M_PI, 0.25);
  parallel_for(m, [&](int i) {
    const double b = basis.centers[i];
    const auto clamped = model::clamped_solve(spec, b, basis.channel + 1, xg);
    fx.col(i) = clamped.channels[basis.channel].values;
    for (int j = 0; j < Xg.n_points; ++j) {
      gX(j, i) = gnorm * std::exp(-gamma * (X(j) - b) * (X(j) - b));
    }
  });

  // 1D kernel pieces; H' = (p^2 + x^2) + (kappa^4 P^2 + V_slow) + a x X.
  Eigen::VectorXd vsX(Xg.n_points);
  for (int j = 0; j < Xg.n_points; ++j) vsX(j) = spec.slow_potential_value(X(j));
  Eigen::MatrixXd hfx(xg.n_points, m), hgX(Xg.n_points, m);
  parallel_for(m, [&](int i) {
    hfx.col(i) = apply_fd_1d(xg, x.cwiseAbs2(), 1.0, fx.col(i));
    hgX.col(i) = apply_fd_1d(Xg, vsX, k4, gX.col(i));
  });

  const Eigen::MatrixXd sx = fx.transpose() * wx.asDiagonal() * fx;
  const Eigen::MatrixXd sX = gX.transpose() * wX.asDiagonal() * gX;
  const Eigen::MatrixXd tx = fx.transpose() * wx.asDiagonal() * hfx;
  const Eigen::MatrixXd tX = gX.transpose() * wX.asDiagonal() * hgX;
  const Eigen::MatrixXd mx = fx.transpose() * (wx.cwiseProduct(x)).asDiagonal() * fx;
  const Eigen::MatrixXd mX = gX.transpose() * (wX.cwiseProduct(X)).asDiagonal() * gX;

  HillWheelerKernels out;
  out.overlap = sx.cwiseProduct(sX);
  out.hamiltonian =
      tx.cwiseProduct(sX) + sx.cwiseProduct(tX) + spec.a * mx.cwiseProduct(mX);
  out.overlap = 0.5 * (out.overlap + out.overlap.transpose()).eval();
  out.hamiltonian = 0.5 * (out.hamiltonian + out.hamiltonian.transpose()).eval();

  // Truncation at 1e-10 caps the usable condition number; anything beyond
  // 1e12 means the raw kernel cannot support even that.
  const Eigen::VectorXd ev = numerics::eigenvalues_only(out.overlap);
  const double emax = ev.maxCoeff();
  double emin_kept = emax;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-10 * emax) emin_kept = std::min(emin_kept, ev(i));
  }
  if (emax / emin_kept > 1e12) {
    throw IllConditioningError("hill_wheeler_kernels: overlap condition number " +
                               std::to_string(emax / emin_kept) + " after truncation");
  }
  return out;
}

HillWheelerSolution solve_hill_wheeler(const HillWheelerKernels& kernels, int k) {
  const Eigen::MatrixXd& h = kernels.hamiltonian;
  const Eigen::MatrixXd& n = kernels.overlap;
  if (h.rows() != n.rows() || h.cols() != n.cols() || h.rows() != h.cols()) {
    throw InputError("solve_hill_wheeler: kernel shape mismatch");
  }
  const int m = static_cast<int>(n.rows());
  auto n_eig = numerics::eigensolve(n, m);
  const double emax = n_eig.spectrum.eigenvalues.maxCoeff();

  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (n_eig.spectrum.eigenvalues(i) > 1e-10 * emax) keep.push_back(i);
  }
  if (keep.empty()) {
    throw DegenerateBasisError("solve_hill_wheeler: every overlap eigenvalue truncated");
  }
  Eigen::MatrixXd canon(m, keep.size());
  for (std::size_t t = 0; t < keep.size(); ++t) {
    canon.col(t) = n_eig.vectors.col(keep[t]) / std::sqrt(n_eig.spectrum.eigenvalues(keep[t]));
  }
  const Eigen::MatrixXd h_ortho = canon.transpose() * h * canon;
  const int k_eff = std::min<int>(k, static_cast<int>(keep.size()));
  auto eig = numerics::eigensolve(0.5 * (h_ortho + h_ortho.transpose()), k_eff);

  HillWheelerSolution out;
  out.energies = std::move(eig.spectrum);
  out.weights = canon * eig.vectors;
  out.kept = static_cast<int>(keep.size());
  return out;
}

}  // namespace sepmot::gcm
