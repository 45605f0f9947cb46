#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "sepmot/errors.hpp"
#include "sepmot/microscope.hpp"
#include "sepmot/model.hpp"
#include "sepmot/numerics.hpp"

using namespace sepmot;
using Catch::Matchers::WithinAbs;
using model::ModelSpec;

namespace {

ModelSpec harmonic(double kappa, double a) {
  ModelSpec s;
  s.kappa = kappa;
  s.a = a;
  return s;
}

ModelSpec doublewell(double kappa, double a) {
  ModelSpec s;
  s.kappa = kappa;
  s.a = a;
  s.slow_potential = model::SlowPotential::double_well;
  return s;
}

}  // namespace

TEST_CASE("locate_minimum on simple wells", "[microscope][minimum]") {
  const auto quad = [](double X) { return X * X; };
  const auto res = microscope::locate_minimum(quad, 0.7);
  CHECK_THAT(res.location(0), WithinAbs(0.0, 1e-7));
  CHECK_THAT(res.value, WithinAbs(0.0, 1e-12));

  // Clamped ground surface at a = 1: minimum at the origin with value 1.
  const ModelSpec spec = harmonic(1.0, 1.0);
  const auto surf = [&](double X) { return spec.clamped_level(0, X); };
  const auto res2 = microscope::locate_minimum(surf, 0.6);
  CHECK_THAT(res2.location(0), WithinAbs(0.0, 1e-7));
  CHECK_THAT(res2.value, WithinAbs(1.0, 1e-10));
}

TEST_CASE("double-well minima come in a parity pair", "[microscope][minimum][property]") {
  const ModelSpec spec = doublewell(0.5, 0.0);
  const auto surf = [&](double X) { return spec.clamped_level(0, X); };
  const auto right = microscope::locate_minimum(surf, 1.0);
  const auto left = microscope::locate_minimum(surf, -1.0);
  CHECK_THAT(right.location(0), WithinAbs(std::sqrt(2.0), 1e-6));
  CHECK_THAT(left.location(0), WithinAbs(-std::sqrt(2.0), 1e-6));
  CHECK_THAT(right.value, WithinAbs(left.value, 1e-10));
}

TEST_CASE("saddle points are rejected", "[microscope][minimum]") {
  const auto saddle = [](const Eigen::VectorXd& v) { return v(0) * v(0) - v(1) * v(1); };
  Eigen::VectorXd start(2);
  start << 0.0, 0.0;
  CHECK_THROWS_AS(microscope::locate_minimum(saddle, start), SaddleError);
}

TEST_CASE("microscope transform reads off Taylor data", "[microscope][transform]") {
  SECTION("pure quadratic has no corrections") {
    const auto e = microscope::microscope_transform([](double X) { return X * X; }, 0.0, 0.5);
    CHECK_THAT(e.harmonic_coefficient, WithinAbs(1.0, 1e-9));
    CHECK_THAT(e.cubic_coefficient, WithinAbs(0.0, 1e-7));
    CHECK_THAT(e.quartic_coefficient, WithinAbs(0.0, 1e-5));
  }
  SECTION("quartic coefficient appears at order lambda^2") {
    const auto e = microscope::microscope_transform(
        [](double X) { return X * X + 0.1 * X * X * X * X; }, 0.0, 1.0);
    CHECK_THAT(e.quartic_coefficient, WithinAbs(0.1, 1e-6));
  }
  SECTION("clamped-surface curvature at a = 1") {
    const ModelSpec spec = harmonic(0.5, 1.0);
    const auto e = microscope::microscope_transform(
        [&](double X) { return spec.clamped_level(0, X); }, 0.0, spec.kappa);
    CHECK_THAT(e.harmonic_coefficient, WithinAbs(0.75, 1e-9));
  }
  SECTION("degenerate minimum is rejected") {
    CHECK_THROWS_AS(microscope::microscope_transform(
                        [](double X) { return X * X * X * X; }, 0.0, 1.0),
                    InputError);
    CHECK_THROWS_AS(microscope::microscope_transform([](double X) { return X * X; }, 0.5, 1.0),
                    InputError);
  }
}

TEST_CASE("commutation bookkeeping survives the dilation", "[microscope][property]") {
  const auto e = microscope::microscope_transform([](double X) { return X * X; }, 0.0, 0.25);
  CHECK(e.position_scale_exponent == 1);
  CHECK(e.momentum_scale_exponent == -1);
  CHECK(e.commutation_preserved());
}

TEST_CASE("asymptotic levels of the clamped surface", "[microscope][levels]") {
  const ModelSpec spec = harmonic(0.5, 1.0);
  const auto e = microscope::microscope_transform(
      [&](double X) { return spec.clamped_level(0, X); }, 0.0, spec.kappa);
  const auto rows = microscope::asymptotic_levels(e, spec, {0, 1});
  // Leading orders reproduce the crude BO value 1 + kappa^2 sqrt(3)/2.
  CHECK_THAT(rows[0].order0 + rows[0].order2,
             WithinAbs(1.0 + 0.25 * std::sqrt(0.75) * 2.0 * 0.5, 1e-9));
  CHECK_THAT(rows[0].order0 + rows[0].order2, WithinAbs(1.2165063509461097, 1e-9));
  CHECK(rows[0].order4 == 0.0);  // quadratic surface
  // The exact level 1.22291... differs only at the next order.
  CHECK_THAT(rows[0].total(), WithinAbs(1.2229115674864717, 8e-3));
}

TEST_CASE("harmonic microscope of the fast problem is exact", "[microscope][levels]") {
  ModelSpec spec = harmonic(1.0, 0.0);
  const auto e = microscope::microscope_transform([](double x) { return x * x; }, 0.0, 1.0);
  const auto rows = microscope::asymptotic_levels(e, spec, {0, 1, 2});
  for (int n = 0; n < 3; ++n) {
    CHECK_THAT(rows[n].order2, WithinAbs(2.0 * (n + 0.5), 1e-9));
    CHECK(rows[n].order4 == 0.0);
  }
}

TEST_CASE("quartic correction against a grid oracle", "[microscope][levels][oracle]") {
  ModelSpec spec = harmonic(1.0, 0.0);
  const auto pot = [](double x) { return x * x + 0.1 * x * x * x * x; };
  const auto e = microscope::microscope_transform(pot, 0.0, 1.0);
  const auto rows = microscope::asymptotic_levels(e, spec, {0});
  // First correction is b4 <x^4>_0 = 0.1 * 3/4.
  CHECK_THAT(rows[0].order4, WithinAbs(0.075, 1e-5));

  Grid1D g(-7.0, 7.0, 1401);
  Eigen::VectorXd v(g.n_points);
  for (int i = 0; i < g.n_points; ++i) v(i) = pot(g.point(i));
  const auto grid_value =
      numerics::eigensolve(numerics::fd_hamiltonian(g, v, 1.0), 1).spectrum.eigenvalues(0);
  // Truncation error is second order in the quartic strength.
  CHECK_THAT(rows[0].total(), WithinAbs(grid_value, 1e-2));
}

TEST_CASE("series with the channel term stays within O(kappa^6) of exact",
          "[microscope][property]") {
  std::vector<double> ratios;
  for (double kappa : {0.5, 0.35, 0.25}) {
    const ModelSpec spec = harmonic(kappa, 1.0);
    const auto e = microscope::microscope_transform(
        [&](double X) { return spec.clamped_level(0, X); }, 0.0, kappa);
    const auto rows = microscope::asymptotic_levels(e, spec, {0}, true, 0);
    const double exact = spec.normal_mode_level(0, 0);
    ratios.push_back(std::abs(rows[0].total() - exact) / std::pow(kappa, 6));
  }
  for (double r : ratios) {
    CHECK(r < 0.5);
  }
  // Bounded, not growing: the last two ratios stay within a factor two.
  CHECK(ratios[2] < 2.0 * ratios[1]);
  CHECK(ratios[1] < 2.0 * ratios[0] + 0.05);
}

TEST_CASE("channel correction term value", "[microscope][levels]") {
  const ModelSpec spec = harmonic(0.5, 1.0);
  const auto e = microscope::microscope_transform(
      [&](double X) { return spec.clamped_level(0, X); }, 0.0, spec.kappa);
  const auto rows = microscope::asymptotic_levels(e, spec, {0}, true, 0);
  // kappa^4 a^2 / 8 for channel 0.
  CHECK_THAT(rows[0].order4_channel, WithinAbs(std::pow(0.5, 4) / 8.0, 1e-12));
}

TEST_CASE("unsupported level requests", "[microscope][levels]") {
  const ModelSpec spec = harmonic(0.5, 1.0);
  const auto e = microscope::microscope_transform([](double X) { return X * X; }, 0.0, 0.5);
  CHECK_THROWS_AS(microscope::asymptotic_levels(e, spec, {-1}), InputError);
}
