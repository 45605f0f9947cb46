#include "sepmot/microscope.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "sepmot/errors.hpp"
#include "sepmot/numerics.hpp"

namespace sepmot::microscope {

namespace {

Eigen::VectorXd fd_gradient(const PotentialND& f, const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd g(d);
  for (int i = 0; i < d; ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x(i)));
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const PotentialND& f, const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  Eigen::MatrixXd hess(d, d);
  const double f0 = f(x);
  for (int i = 0; i < d; ++i) {
    const double hi = 1e-4 * (1.0 + std::abs(x(i)));
    for (int j = i; j < d; ++j) {
      const double hj = 1e-4 * (1.0 + std::abs(x(j)));
      if (i == j) {
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += hi;
        xm(i) -= hi;
        hess(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (hi * hi);
      } else {
        Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
        xpp(i) += hi;
        xpp(j) += hj;
        xpm(i) += hi;
        xpm(j) -= hj;
        xmp(i) -= hi;
        xmp(j) += hj;
        xmm(i) -= hi;
        xmm(j) -= hj;
        hess(i, j) = hess(j, i) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * hi * hj);
      }
    }
  }
  return hess;
}

}  // namespace

MinimumResult locate_minimum(const PotentialND& potential, const Eigen::VectorXd& start) {
  Eigen::VectorXd x = start;
  constexpr int max_iter = 200;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd g = fd_gradient(potential, x);
    if (g.norm() < 1e-9) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd hess = fd_hessian(potential, x);
    Eigen::VectorXd step = hess.ldlt().solve(g);
    if (!step.allFinite() || step.dot(g) <= 0.0) step = g;  // fall back to descent
    // Backtracking line search.
    double t = 1.0;
    const double f0 = potential(x);
    for (int ls = 0; ls < 60; ++ls) {
      if (potential(x - t * step) < f0) break;
      t *= 0.5;
    }
    x -= t * step;
  }
  if (!converged) {
    const Eigen::VectorXd g = fd_gradient(potential, x);
    if (g.norm() >= 1e-8) {
      throw IterationError("locate_minimum: gradient norm " + std::to_string(g.norm()) +
                           " after " + std::to_string(max_iter) + " iterations");
    }
  }
  MinimumResult out;
  out.location = x;
  out.value = potential(x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fd_hessian(potential, x));
  out.hessian_eigenvalues = es.eigenvalues();
  if (out.hessian_eigenvalues.minCoeff() < -1e-6) {
    throw SaddleError("locate_minimum: negative Hessian eigenvalue " +
                      std::to_string(out.hessian_eigenvalues.minCoeff()) +
                      "; the stationary point is a saddle");
  }
  return out;
}

MinimumResult locate_minimum(const Potential1D& potential, double start) {
  Eigen::VectorXd s(1);
  s(0) = start;
  return locate_minimum([&](const Eigen::VectorXd& v) { return potential(v(0)); }, s);
}

MicroscopeExpansion microscope_transform(const Potential1D& potential, double x0,
                                         double lambda) {
  if (lambda == 0.0) throw InputError("microscope_transform: lambda must be nonzero");
  const double h = 1e-3 * (1.0 + std::abs(x0));
  const double fm2 = potential(x0 - 2.0 * h);
  const double fm1 = potential(x0 - h);
  const double f0 = potential(x0);
  const double fp1 = potential(x0 + h);
  const double fp2 = potential(x0 + 2.0 * h);

  const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  const double d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  const double d3 = (-fm2 + 2.0 * fm1 - 2.0 * fp1 + fp2) / (2.0 * h * h * h);
  const double d4 = (fm2 - 4.0 * fm1 + 6.0 * f0 - 4.0 * fp1 + fp2) / (h * h * h * h);

  if (std::abs(d1) > 1e-6 * (1.0 + std::abs(d2))) {
    throw InputError("microscope_transform: x0 is not a stationary point (V' = " +
                     std::to_string(d1) + ")");
  }
  if (!(d2 > 1e-8)) {
    throw InputError("microscope_transform: vanishing Hessian at x0; degenerate minimum");
  }
  MicroscopeExpansion out;
  out.x0 = x0;
  out.v0 = f0;
  out.lambda = lambda;
  out.harmonic_coefficient = 0.5 * d2;
  out.cubic_coefficient = d3 / 6.0;
  out.quartic_coefficient = d4 / 24.0;
  out.harmonic_frequency = std::sqrt(2.0 * d2);
  return out;
}

std::vector<LevelSeries> asymptotic_levels(const MicroscopeExpansion& expansion,
                                           const model::ModelSpec& spec,
                                           const std::vector<int>& levels,
                                           bool include_channel_term, int channel) {
  for (int n : levels) {
    if (n < 0) throw InputError("asymptotic_levels: negative level index");
  }
  const double lambda = expansion.lambda;
  const double a_coef = expansion.harmonic_coefficient;
  const double omega = 2.0 * std::sqrt(a_coef);       // levels omega (n + 1/2)
  const double ell2 = 1.0 / std::sqrt(a_coef);        // oscillator length^2
  const double b3 = expansion.cubic_coefficient;
  const double b4 = expansion.quartic_coefficient;

  double channel_term = 0.0;
  if (include_channel_term) {
    // <d phi_ch | d phi_ch> for the displaced-oscillator channels is
    // (a^2/4)(ch + 1/2), independent of X.
    channel_term = 0.25 * spec.a * spec.a * (channel + 0.5);
  }

  std::vector<LevelSeries> out;
  out.reserve(levels.size());
  for (int n : levels) {
    LevelSeries row;
    row.n = n;
    row.order0 = expansion.v0;
    row.order2 = lambda * lambda * omega * (n + 0.5);
    // Second-order shift: first order in the quartic term plus second order
    // in the cubic term, both with oscillator length ell.
    const double quartic = b4 * ell2 * ell2 * 0.75 * (2.0 * n * n + 2.0 * n + 1.0);
    const double cubic = -(b3 * b3) * ell2 * ell2 * ell2 / omega *
                         (30.0 * n * n + 30.0 * n + 11.0) / 8.0;
    row.order4 = std::pow(lambda, 4) * (quartic + cubic);
    row.order4_channel = std::pow(lambda, 4) * channel_term;
    out.push_back(row);
  }
  return out;
}

}  // namespace sepmot::microscope
