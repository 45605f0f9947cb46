#include "sepmot/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sepmot/errors.hpp"
#include "sepmot/numerics.hpp"

namespace sepmot::factorization {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Factorization hunter_factorize(const WaveField2D& psi, double eps_rel) {
  if (std::abs(psi.norm - 1.0) > 1e-6) {
    throw InputError("hunter_factorize: state norm " + std::to_string(psi.norm) +
                     " deviates from 1 by more than 1e-6");
  }
  const int nX = psi.grid.slow.n_points;
  const Eigen::VectorXd wx = psi.grid.fast.trapezoid_weights();

  Eigen::VectorXd chi(nX);
  for (int j = 0; j < nX; ++j) {
    chi(j) = std::sqrt(wx.dot(psi.values.col(j).cwiseAbs2()));
  }
  const double threshold = eps_rel * chi.maxCoeff();

  Factorization out;
  out.grid = psi.grid;
  out.mask.assign(nX, 0);
  out.phi = Eigen::MatrixXd::Zero(psi.grid.fast.n_points, nX);
  for (int j = 0; j < nX; ++j) {
    if (chi(j) > threshold) {
      out.mask[j] = 1;
      out.phi.col(j) = psi.values.col(j) / chi(j);
    }
  }
  out.chi = make_wavefield(psi.grid.slow, std::move(chi));
  return out;
}

Eigen::VectorXd exact_potential(const Factorization& fact, const model::ModelSpec& spec,
                                PotentialVariant variant) {
  const int nx = fact.grid.fast.n_points;
  const int nX = fact.grid.slow.n_points;
  bool any_masked = false;
  for (int j = 0; j < nX; ++j) any_masked |= (fact.mask[j] != 0);
  if (!any_masked) throw InputError("exact_potential: empty masked region");

  const Eigen::VectorXd x = fact.grid.fast.points();
  const Eigen::VectorXd X = fact.grid.slow.points();
  const Eigen::VectorXd wx = fact.grid.fast.trapezoid_weights();
  const double dx = fact.grid.fast.spacing();
  const double dX = fact.grid.slow.spacing();
  const double k4 = std::pow(spec.kappa, 4);

  Eigen::VectorXd u = Eigen::VectorXd::Constant(nX, kNaN);
  for (int j = 0; j < nX; ++j) {
    if (!fact.mask[j]) continue;
    const Eigen::VectorXd phi = fact.phi.col(j);

    // Clamped part: fast kinetic + full potential at this X.
    Eigen::VectorXd hphi(nx);
    for (int i = 0; i < nx; ++i) {
      const double lap = ((i > 0 ? phi(i - 1) : 0.0) - 2.0 * phi(i) +
                          (i + 1 < nx ? phi(i + 1) : 0.0)) /
                         (dx * dx);
      const double v = x(i) * x(i) + spec.slow_potential_value(X(j)) + spec.a * x(i) * X(j);
      hphi(i) = -lap + v * phi(i);
    }
    double val = wx.dot(phi.cwiseProduct(hphi));

    if (variant == PotentialVariant::full_internal) {
      // Slow kinetic on phi; the stencil must stay inside the mask.
      if (j == 0 || j + 1 >= nX || !fact.mask[j - 1] || !fact.mask[j + 1]) {
        continue;  // local missing value
      }
      const Eigen::VectorXd lapX =
          (fact.phi.col(j - 1) - 2.0 * phi + fact.phi.col(j + 1)) / (dX * dX);
      val += k4 * wx.dot(phi.cwiseProduct(-lapX));
    }
    u(j) = val;
  }
  return u;
}

std::vector<double> detect_spikes(const Eigen::VectorXd& potential,
                                  const std::vector<char>& mask,
                                  const model::AdiabaticScan& baseline) {
  const int nX = static_cast<int>(potential.size());
  if (static_cast<int>(mask.size()) != nX || baseline.slow.n_points != nX) {
    throw InputError("detect_spikes: potential, mask and baseline must share the slow grid");
  }
  std::vector<int> valid;
  std::vector<double> dvals;
  Eigen::VectorXd d = Eigen::VectorXd::Constant(nX, kNaN);
  for (int j = 0; j < nX; ++j) {
    if (mask[j] && std::isfinite(potential(j))) {
      d(j) = potential(j) - baseline.energies(0, j);
      valid.push_back(j);
      dvals.push_back(d(j));
    }
  }
  if (valid.size() < 10) {
    throw InsufficientDataError("detect_spikes: only " + std::to_string(valid.size()) +
                                " valid points in the masked region");
  }
  auto median_of = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  const double med = median_of(dvals);
  std::vector<double> absdev;
  absdev.reserve(dvals.size());
  for (double v : dvals) absdev.push_back(std::abs(v - med));
  const double mad = median_of(absdev);

  std::vector<double> locations;
  for (std::size_t t = 1; t + 1 < valid.size(); ++t) {
    const int j = valid[t];
    const int jm = valid[t - 1];
    const int jp = valid[t + 1];
    if (jp - jm != 2) continue;  // require contiguous neighbours
    if (d(j) > d(jm) && d(j) > d(jp) && (d(j) - med) > 5.0 * mad) {
      locations.push_back(baseline.slow.point(j));
    }
  }
  std::sort(locations.begin(), locations.end());
  return locations;
}

EnergyDecomposition energy_decomposition(const Factorization& fact,
                                         const Eigen::VectorXd& potential,
                                         const model::ModelSpec& spec) {
  const int nX = fact.grid.slow.n_points;
  const double dX = fact.grid.slow.spacing();
  const double k4 = std::pow(spec.kappa, 4);
  const Eigen::VectorXd wX = fact.grid.slow.trapezoid_weights();
  EnergyDecomposition out;
  for (int j = 0; j < nX; ++j) {
    const double dchi = ((j + 1 < nX ? fact.chi.values(j + 1) : 0.0) -
                         (j > 0 ? fact.chi.values(j - 1) : 0.0)) /
                        (2.0 * dX);
    out.chi_kinetic += wX(j) * k4 * dchi * dchi;
    if (fact.mask[j] && std::isfinite(potential(j))) {
      out.potential_term += wX(j) * fact.chi.values(j) * fact.chi.values(j) * potential(j);
    }
  }
  return out;
}

}  // namespace sepmot::factorization
