#pragma once

#include <functional>
#include <optional>

namespace sepmot::marcelin {

/// Classical rate problem for a separable Hamiltonian H = p^2 + V(q) in model
/// units (q_dot = 2p). The dividing surface is the simplest one satisfying
/// the crossing condition: S(q, p) = q - q_divide.
struct RateProblem {
  std::function<double(double)> potential;
  double dividing_point = 0.0;
  double beta = 1.0;
  double q_lo = -10.0;  // search box; the reactant side is [q_lo, q_divide]
  double q_hi = 10.0;
  /// Optional separable harmonic bath mode; its partition factors cancel in
  /// the rate but are reported for the component breakdown.
  std::optional<double> bath_frequency;

  void validate() const;
};

/// Boltzmann phase-space density e^{-beta H(q, p)} (the free-energy prefactor
/// of the distribution is carried separately by rate_forward).
double phase_space_density(const RateProblem& problem, double q, double p);

enum class FluxDirection { forward, backward };

/// One-way flux through the dividing point:
///   int dp theta(+-q_dot) |q_dot| e^{-beta H(q_divide, p)},
/// by Gauss-Legendre quadrature on a mapped half-line, with a doubled-node
/// convergence check at 1e-8 relative.
double one_way_flux(const RateProblem& problem, FluxDirection direction = FluxDirection::forward);

struct RateResult {
  double rate = 0.0;
  double prefactor = 0.0;           // rate with the Boltzmann factor divided out
  double exponential_factor = 0.0;  // e^{-beta (V(q_divide) - V(q_min))}
  double barrier = 0.0;             // V(q_divide) - V(q_min)
  double well_frequency = 0.0;      // sqrt(2 V''(q_min)): harmonic fit
  double flux = 0.0;
  double partition = 0.0;           // reactant-side phase-space integral
};

/// k = one-way flux / reactant partition integral. Approaches the classical
/// transition-state value (omega0 / 2 pi) e^{-beta V_barrier} for a harmonic
/// reactant as beta * V_barrier grows.
RateResult rate_forward(const RateProblem& problem);

/// Same construction on the product side (theta(-q_dot), q > q_divide).
RateResult rate_backward(const RateProblem& problem);

}  // namespace sepmot::marcelin
