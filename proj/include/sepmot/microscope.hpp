#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "sepmot/model.hpp"

namespace sepmot::microscope {

using Potential1D = std::function<double(double)>;
using PotentialND = std::function<double(const Eigen::VectorXd&)>;

struct MinimumResult {
  Eigen::VectorXd location;
  double value = 0.0;
  Eigen::VectorXd hessian_eigenvalues;
};

/// Newton descent with finite-difference gradients from `start`; requires the
/// gradient norm to fall below 1e-8 and the Hessian to be positive definite
/// (a negative eigenvalue raises SaddleError).
MinimumResult locate_minimum(const PotentialND& potential, const Eigen::VectorXd& start);
MinimumResult locate_minimum(const Potential1D& potential, double start);

/// Translation + dilation about a minimum:
///   N(lambda) = -(1/lambda^4) d^2/du^2 + (1/lambda^2)(V(x0 + lambda u) - V0),
/// expanded through second order in lambda. The position and momentum scale
/// factors are lambda and 1/lambda, so commutators are preserved for any
/// lambda != 0; the exponents are recorded for the structural check.
struct MicroscopeExpansion {
  double x0 = 0.0;
  double v0 = 0.0;
  double lambda = 1.0;
  double harmonic_coefficient = 0.0;  // V''(x0)/2, the order-0 term of N
  double cubic_coefficient = 0.0;     // V'''(x0)/6, enters at order lambda
  double quartic_coefficient = 0.0;   // V''''(x0)/24, enters at order lambda^2
  double harmonic_frequency = 0.0;    // sqrt(2 V''): levels freq*(n+1/2)
  int position_scale_exponent = 1;
  int momentum_scale_exponent = -1;

  bool commutation_preserved() const {
    return position_scale_exponent + momentum_scale_exponent == 0;
  }
};

/// Taylor coefficients by 5-point stencils with step 1e-3 (1 + |x0|).
/// Throws on a degenerate (flat) minimum.
MicroscopeExpansion microscope_transform(const Potential1D& potential, double x0, double lambda);

struct LevelSeries {
  int n = 0;
  double order0 = 0.0;          // V0
  double order2 = 0.0;          // lambda^2 * harmonic level
  double order4 = 0.0;          // lambda^4 * second-order cubic/quartic shift
  double order4_channel = 0.0;  // lambda^4 * diagonal derivative-coupling term
  double total() const { return order0 + order2 + order4 + order4_channel; }
};

/// Asymptotic level series E_n = V0 + lambda^2 mu_n^0 + lambda^4 mu_n^2 with
/// lambda playing the role the BO parameter kappa plays for the model (the
/// series is asymptotic, not convergent; orders beyond lambda^4 are
/// unsupported). When the expansion describes a clamped surface of `spec`,
/// include_channel_term adds the diagonal derivative-coupling constant of
/// `channel`, which enters at the same lambda^4 order.
std::vector<LevelSeries> asymptotic_levels(const MicroscopeExpansion& expansion,
                                           const model::ModelSpec& spec,
                                           const std::vector<int>& levels,
                                           bool include_channel_term = false, int channel = 0);

}  // namespace sepmot::microscope
