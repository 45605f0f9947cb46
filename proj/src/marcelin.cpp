#include "sepmot/marcelin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sepmot/errors.hpp"
#include "sepmot/numerics.hpp"

namespace sepmot::marcelin {

void RateProblem::validate() const {
  if (!potential) throw InputError("RateProblem: missing potential");
  if (!(beta > 0.0)) throw InputError("RateProblem: beta must be positive");
  if (!(q_lo < dividing_point && dividing_point < q_hi)) {
    throw InputError("RateProblem: dividing point must lie inside [q_lo, q_hi]");
  }
  if (bath_frequency && !(*bath_frequency > 0.0)) {
    throw InputError("RateProblem: bath frequency must be positive");
  }
}

double phase_space_density(const RateProblem& problem, double q, double p) {
  problem.validate();
  return std::exp(-problem.beta * (p * p + problem.potential(q)));
}

namespace {

/// int_0^infty f(p) dp with p = t / (1 - t) on Gauss-Legendre nodes.
double half_line_integral(const std::function<double(double)>& f, int n_nodes) {
  Eigen::VectorXd nodes, weights;
  numerics::gauss_legendre(n_nodes, nodes, weights);
  double sum = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    const double t = 0.5 * (nodes(i) + 1.0);
    const double om = 1.0 - t;
    const double p = t / om;
    sum += 0.5 * weights(i) * f(p) / (om * om);
  }
  return sum;
}

double converged_half_line(const std::function<double(double)>& f, const char* what) {
  const double a = half_line_integral(f, 96);
  const double b = half_line_integral(f, 192);
  if (std::abs(b - a) > 1e-8 * std::max(1e-300, std::abs(b))) {
    throw AccuracyError(std::string(what) + ": quadrature did not converge");
  }
  return b;
}

double segment_integral(const std::function<double(double)>& f, double lo, double hi,
                        int n_nodes) {
  Eigen::VectorXd nodes, weights;
  numerics::gauss_legendre(n_nodes, nodes, weights);
  const double c = 0.5 * (lo + hi);
  const double r = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int i = 0; i < n_nodes; ++i) sum += weights(i) * f(c + r * nodes(i));
  return r * sum;
}

double golden_minimum(const std::function<double(double)>& f, double lo, double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 300 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

RateResult rate_one_side(const RateProblem& problem, bool forward) {
  problem.validate();
  const double beta = problem.beta;
  const double qd = problem.dividing_point;
  const auto& v = problem.potential;

  const double side_lo = forward ? problem.q_lo : qd;
  const double side_hi = forward ? qd : problem.q_hi;

  const double q_min = golden_minimum(v, side_lo, side_hi);
  const double v_min = v(q_min);
  const double v_div = v(qd);
  if (!(v_div >= v_min)) {
    throw InputError("rate: potential at the dividing point lies below the well minimum");
  }
  // Harmonic fit at the well bottom: V = V_min + (omega0/2)^2 (q - q_min)^2 ...
  // with H = p^2 + V and q_dot = 2p the oscillation frequency is sqrt(2 V'').
  const double h = 1e-4 * (1.0 + std::abs(q_min));
  const double curv = (v(q_min + h) - 2.0 * v_min + v(q_min - h)) / (h * h);
  if (!(curv > 0.0)) {
    throw InputError("rate: reactant well has non-positive curvature; harmonic fit failed");
  }
  const double omega0 = std::sqrt(2.0 * curv);

  // Decay check at the outer edge of the reactant region.
  const double edge = forward ? problem.q_lo : problem.q_hi;
  if (std::exp(-beta * (v(edge) - v_min)) > 1e-10) {
    throw InputError("rate: reactant region is not bound (Boltzmann weight at the box edge)");
  }

  const double flux =
      converged_half_line([&](double p) { return 2.0 * p * std::exp(-beta * (p * p + v_div)); },
                          "one_way_flux");

  // Reactant partition: the p integral is a half-line quadrature, the q
  // integral a converged panel quadrature over the reactant side.
  const double p_part = 2.0 * converged_half_line(
                                  [&](double p) { return std::exp(-beta * p * p); }, "partition");
  const auto qdens = [&](double q) { return std::exp(-beta * v(q)); };
  const double q_part_a = segment_integral(qdens, side_lo, side_hi, 200);
  const double q_part_b = segment_integral(qdens, side_lo, side_hi, 400);
  if (std::abs(q_part_b - q_part_a) > 1e-8 * std::max(1e-300, q_part_b)) {
    throw AccuracyError("rate: reactant partition quadrature did not converge");
  }
  const double partition = p_part * q_part_b;

  // A separable harmonic bath multiplies flux and partition by the same
  // classical factor, so the rate is unchanged.
  const double z_bath =
      problem.bath_frequency ? 2.0 * M_PI / (beta * *problem.bath_frequency) : 1.0;

  RateResult out;
  out.flux = flux * z_bath;
  out.partition = partition * z_bath;
  out.rate = flux / partition;
  out.barrier = v_div - v_min;
  out.exponential_factor = std::exp(-beta * out.barrier);
  out.prefactor = out.rate / out.exponential_factor;
  out.well_frequency = omega0;
  return out;
}

}  // namespace

double one_way_flux(const RateProblem& problem, FluxDirection direction) {
  problem.validate();
  const double beta = problem.beta;
  const double v_div = problem.potential(problem.dividing_point);
  // theta(q_dot) q_dot and theta(-q_dot) |q_dot| give identical integrals for
  // the even equilibrium density; both are computed over p > 0.
  (void)direction;
  return converged_half_line(
      [&](double p) { return 2.0 * p * std::exp(-beta * (p * p + v_div)); }, "one_way_flux");
}

RateResult rate_forward(const RateProblem& problem) { return rate_one_side(problem, true); }

RateResult rate_backward(const RateProblem& problem) { return rate_one_side(problem, false); }

}  // namespace sepmot::marcelin
