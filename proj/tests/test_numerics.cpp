#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "sepmot/errors.hpp"
#include "sepmot/grid.hpp"
#include "sepmot/numerics.hpp"
#include "sepmot/threading.hpp"

using namespace sepmot;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::VectorXd sample(const Grid1D& g, const std::function<double(double)>& f) {
  Eigen::VectorXd v(g.n_points);
  for (int i = 0; i < g.n_points; ++i) v(i) = f(g.point(i));
  return v;
}

}  // namespace

TEST_CASE("Grid1D invariants", "[numerics][grid]") {
  CHECK_THROWS_AS(Grid1D(1.0, -1.0, 100), InputError);
  CHECK_THROWS_AS(Grid1D(-1.0, 1.0, 7), InputError);
  Grid1D g(-10.0, 10.0, 401);
  CHECK(g.spacing() == 0.05);
  CHECK(g.point(0) == -10.0);
  CHECK_THAT(g.point(400), WithinAbs(10.0, 1e-14));
  CHECK_THAT(g.trapezoid_weights().sum(), WithinAbs(20.0, 1e-12));
}

TEST_CASE("Grid2D point cap", "[numerics][grid]") {
  Grid1D big(-1.0, 1.0, 3000);
  CHECK_THROWS_AS(Grid2D(big, big), ResourceError);
  CHECK_NOTHROW(Grid2D(Grid1D(-1, 1, 100), Grid1D(-1, 1, 100)));
}

TEST_CASE("FD oscillator ground state on the reference grid", "[numerics][fd]") {
  // p^2 + x^2 has levels 2(n + 1/2); at 401 points the second-order stencil
  // floor is |Delta^2/12 <p^4>| ~ 1.6e-4, which bounds what this grid can do.
  Grid1D g(-10.0, 10.0, 401);
  const Eigen::MatrixXd h = numerics::fd_hamiltonian(g, sample(g, [](double x) { return x * x; }), 1.0);
  const auto res = numerics::eigensolve(h, 1);
  CHECK_THAT(res.spectrum.eigenvalues(0), WithinAbs(1.0, 2e-4));
}

TEST_CASE("FD matrix is the pure kinetic stencil for zero potential", "[numerics][fd]") {
  Grid1D g(0.0, 1.0, 8);
  const Eigen::MatrixXd h = numerics::fd_hamiltonian(g, Eigen::VectorXd::Zero(8), 2.5);
  const double c = 2.5 / (g.spacing() * g.spacing());
  for (int i = 0; i < 8; ++i) {
    CHECK(h(i, i) == 2.0 * c);
    for (int j = 0; j < 8; ++j) {
      if (std::abs(i - j) == 1) CHECK(h(i, j) == -c);
      if (std::abs(i - j) > 1) CHECK(h(i, j) == 0.0);
    }
  }
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("2D FD ground energy equals the sum of 1D oracles", "[numerics][fd]") {
  // For a separable potential the 2D FD matrix is h \kron I + I \kron h, so
  // its eigenvalues are exactly the pairwise sums of the 1D FD eigenvalues.
  Grid1D gx(-6.0, 6.0, 50);
  Grid1D gX(-6.0, 6.0, 50);
  Grid2D g2(gx, gX);
  Eigen::MatrixXd v(50, 50);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      v(i, j) = gx.point(i) * gx.point(i) + gX.point(j) * gX.point(j);
    }
  }
  const Eigen::MatrixXd h2 = numerics::fd_hamiltonian(g2, v, 1.0, 1.0);
  const auto res2 = numerics::eigensolve(h2, 1);
  const auto rx = numerics::eigensolve(
      numerics::fd_hamiltonian(gx, sample(gx, [](double x) { return x * x; }), 1.0), 1);
  CHECK_THAT(res2.spectrum.eigenvalues(0),
             WithinAbs(2.0 * rx.spectrum.eigenvalues(0), 1e-10));

  // The same identity evaluated on a fine axis grid pins the absolute value;
  // a dense solve of that tensor grid would give the identical number.
  Grid1D fine(-6.0, 6.0, 901);
  const auto rf = numerics::eigensolve(
      numerics::fd_hamiltonian(fine, sample(fine, [](double x) { return x * x; }), 1.0), 1);
  CHECK_THAT(2.0 * rf.spectrum.eigenvalues(0), WithinAbs(2.0, 1e-3));
}

TEST_CASE("fd_hamiltonian input errors", "[numerics][fd]") {
  Grid1D g(-1.0, 1.0, 16);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(16);
  CHECK_THROWS_AS(numerics::fd_hamiltonian(g, v, -1.0), InputError);
  v(3) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(numerics::fd_hamiltonian(g, v, 1.0), InputError);
  Grid2D g2(Grid1D(-1, 1, 100), Grid1D(-1, 1, 100));
  CHECK_THROWS_AS(
      numerics::fd_hamiltonian(g2, Eigen::MatrixXd::Zero(100, 100), 1.0, 1.0, 6000),
      ResourceError);
}

TEST_CASE("eigensolve forced 2x2 and diagonal cases", "[numerics][eig]") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 1, 0;
  const auto r = numerics::eigensolve(m, 2);
  CHECK_THAT(r.spectrum.eigenvalues(0), WithinAbs(-1.0, 1e-14));
  CHECK_THAT(r.spectrum.eigenvalues(1), WithinAbs(1.0, 1e-14));

  Eigen::MatrixXd d = Eigen::VectorXd::LinSpaced(5, 4.0, 0.0).asDiagonal();
  const auto rd = numerics::eigensolve(d, 5);
  for (int i = 0; i < 5; ++i) CHECK_THAT(rd.spectrum.eigenvalues(i), WithinAbs(i, 1e-14));
}

TEST_CASE("eigensolve oscillator triple", "[numerics][eig]") {
  Grid1D g(-8.0, 8.0, 801);
  const auto r = numerics::eigensolve(
      numerics::fd_hamiltonian(g, sample(g, [](double x) { return x * x; }), 1.0), 3);
  CHECK_THAT(r.spectrum.eigenvalues(0), WithinAbs(1.0, 1e-3));
  CHECK_THAT(r.spectrum.eigenvalues(1), WithinAbs(3.0, 1e-3));
  CHECK_THAT(r.spectrum.eigenvalues(2), WithinAbs(5.0, 1e-3));
}

TEST_CASE("eigensolve rejects asymmetric input", "[numerics][eig]") {
  Eigen::MatrixXd m(3, 3);
  m.setZero();
  m(0, 1) = 1.0;
  m(1, 0) = 1.0 + 1e-6;
  CHECK_THROWS_AS(numerics::eigensolve(m, 1), InputError);
}

TEST_CASE("eigenvector orthonormality and sign convention", "[numerics][eig][property]") {
  std::mt19937 rng(42);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(40, 40);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j <= i; ++j) {
      m(i, j) = m(j, i) = dist(rng);
    }
  }
  const auto r = numerics::eigensolve(m, 40);
  const Eigen::MatrixXd gram = r.vectors.transpose() * r.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff() < 1e-8);
  for (int j = 0; j < 40; ++j) {
    Eigen::Index imax;
    r.vectors.col(j).cwiseAbs().maxCoeff(&imax);
    CHECK(r.vectors(imax, j) > 0.0);
  }
}

TEST_CASE("grid refinement shows second-order convergence", "[numerics][fd][property]") {
  const auto pot = [](double x) { return x * x + 0.2 * x * x * x * x; };
  const auto levels = [&](int n) {
    Grid1D g(-7.0, 7.0, n);
    return numerics::eigensolve(numerics::fd_hamiltonian(g, sample(g, pot), 1.0), 3)
        .spectrum.eigenvalues;
  };
  const Eigen::VectorXd coarse = levels(301);
  const Eigen::VectorXd mid = levels(601);
  const Eigen::VectorXd ref = levels(4801);  // effectively converged
  for (int i = 0; i < 3; ++i) {
    const double ratio = (coarse(i) - ref(i)) / (mid(i) - ref(i));
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
  }
}

TEST_CASE("tridiagonal Sturm count matches dense eigenvalues", "[numerics][eig]") {
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  const int n = 60;
  Eigen::VectorXd diag(n), off(n - 1);
  for (int i = 0; i < n; ++i) diag(i) = dist(rng);
  for (int i = 0; i < n - 1; ++i) off(i) = dist(rng);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
  full.diagonal() = diag;
  full.diagonal(1) = off;
  full.diagonal(-1) = off;
  const Eigen::VectorXd ev = numerics::eigenvalues_only(full);
  for (double bound : {-2.0, -0.5, 0.0, 0.7, 2.5}) {
    int expected = 0;
    for (int i = 0; i < n; ++i) {
      if (ev(i) < bound) ++expected;
    }
    CHECK(numerics::tridiagonal_count_below(diag, off, bound) == expected);
  }
}

TEST_CASE("hermite function values", "[numerics][hermite]") {
  CHECK_THAT(numerics::hermite_function(0, 1.0, 0.0), WithinAbs(std::pow(M_PI, -0.25), 1e-14));
  CHECK(numerics::hermite_function(1, 1.0, 0.0) == 0.0);
  CHECK(numerics::hermite_function(1, 0.37, 0.0) == 0.0);

  // Quadrature self-check for n = 2 on [-12, 12].
  Grid1D g(-12.0, 12.0, 2401);
  const Eigen::VectorXd h2 = sample(g, [](double x) { return numerics::hermite_function(2, 1.0, x); });
  CHECK_THAT(trapezoid(g, h2.cwiseAbs2()), WithinAbs(1.0, 1e-9));

  CHECK_THROWS_AS(numerics::hermite_function(201, 1.0, 0.0), UnsupportedError);
  CHECK_THROWS_AS(numerics::hermite_function(2, -1.0, 0.0), InputError);
}

TEST_CASE("hermite recurrence is stable to n = 50", "[numerics][hermite][property]") {
  Grid1D g(-16.0, 16.0, 6401);
  for (int n : {5, 17, 33, 50}) {
    const Eigen::VectorXd hn =
        sample(g, [n](double x) { return numerics::hermite_function(n, 1.0, x); });
    CHECK_THAT(trapezoid(g, hn.cwiseAbs2()), WithinAbs(1.0, 1e-7));
  }
  // Scaled functions stay normalized too.
  Grid1D gs(-8.0, 8.0, 3201);
  const Eigen::VectorXd h7 =
      sample(gs, [](double x) { return numerics::hermite_function(7, 0.5, x); });
  CHECK_THAT(trapezoid(gs, h7.cwiseAbs2()), WithinAbs(1.0, 1e-7));
}

TEST_CASE("gauss_legendre integrates polynomials exactly", "[numerics][quadrature]") {
  Eigen::VectorXd x, w;
  numerics::gauss_legendre(8, x, w);
  double s6 = 0.0, s14 = 0.0;
  for (int i = 0; i < 8; ++i) {
    s6 += w(i) * std::pow(x(i), 6);
    s14 += w(i) * std::pow(x(i), 14);
  }
  CHECK_THAT(s6, WithinAbs(2.0 / 7.0, 1e-14));
  CHECK_THAT(s14, WithinAbs(2.0 / 15.0, 1e-13));
  CHECK_THAT(w.sum(), WithinAbs(2.0, 1e-14));
}

TEST_CASE("Sommerfeld quantization of the harmonic well", "[numerics][sommerfeld]") {
  const auto v = [](double q) { return q * q; };
  // J(E) = pi E for V = q^2, so n h = 2 pi n gives E = 2n: no zero point.
  CHECK_THAT(numerics::sommerfeld_quantize(v, 1, 2.0 * M_PI, -12.0, 12.0), WithinAbs(2.0, 1e-8));
  CHECK_THAT(numerics::sommerfeld_quantize(v, 3, 2.0 * M_PI, -12.0, 12.0), WithinAbs(6.0, 1e-8));
}

TEST_CASE("Sommerfeld linear-well law", "[numerics][sommerfeld][property]") {
  const auto v = [](double q) { return q * q; };
  // Least-squares slope of E_n against n over n = 1..5.
  double sn = 0, se = 0, snn = 0, sne = 0;
  for (int n = 1; n <= 5; ++n) {
    const double e = numerics::sommerfeld_quantize(v, n, 2.0 * M_PI, -14.0, 14.0);
    sn += n;
    se += e;
    snn += static_cast<double>(n) * n;
    sne += n * e;
  }
  const double slope = (5.0 * sne - sn * se) / (5.0 * snn - sn * sn);
  CHECK_THAT(slope, WithinAbs(2.0, 1e-6));
}

TEST_CASE("Sommerfeld quartic well against an independent oracle", "[numerics][sommerfeld]") {
  const auto v = [](double q) { return q * q * q * q; };
  const double e = numerics::sommerfeld_quantize(v, 1, 2.0 * M_PI, -6.0, 6.0);

  // Oracle: J(E) by plain midpoint quadrature between turning points, root
  // by bisection, both written independently of the library path.
  const auto j_direct = [&](double energy) {
    const double t = std::pow(energy, 0.25);
    const int m = 20000;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const double q = -t + (i + 0.5) * (2.0 * t / m);
      const double val = energy - v(q);
      if (val > 0) sum += std::sqrt(val) * (2.0 * t / m);
    }
    return 2.0 * sum;
  };
  double lo = 0.5, hi = 8.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (j_direct(mid) < 2.0 * M_PI) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  CHECK_THAT(e, WithinAbs(0.5 * (lo + hi), 1e-6));
}

TEST_CASE("Sommerfeld reports missing bracket", "[numerics][sommerfeld]") {
  const auto v = [](double q) { return q * q; };
  // Search range too small: J at the top of the range never reaches n h.
  CHECK_THROWS_AS(numerics::sommerfeld_quantize(v, 50, 2.0 * M_PI, -1.0, 1.0), NoSolutionError);
}

TEST_CASE("parallel map over eigenproblems is deterministic", "[numerics][threads]") {
  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  std::vector<Eigen::MatrixXd> mats;
  for (int t = 0; t < 12; ++t) {
    Eigen::MatrixXd m(20, 20);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = dist(rng);
    }
    mats.push_back(m);
  }
  const auto run = [&](int threads) {
    set_max_threads(threads);
    std::vector<Eigen::VectorXd> out(mats.size());
    parallel_for(static_cast<int>(mats.size()),
                 [&](int i) { out[i] = numerics::eigensolve(mats[i], 5).spectrum.eigenvalues; });
    set_max_threads(0);
    return out;
  };
  const auto serial = run(1);
  const auto parallel = run(4);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    CHECK((serial[i] - parallel[i]).cwiseAbs().maxCoeff() == 0.0);
  }
}
