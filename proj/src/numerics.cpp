#include "sepmot/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "sepmot/errors.hpp"

#ifdef SEPMOT_WITH_LAPACK
#include <lapacke.h>
extern "C" void openblas_set_num_threads(int);
#endif

namespace sepmot::numerics {

namespace {

void check_potential_finite(const Eigen::Ref<const Eigen::MatrixXd>& v) {
  if (!v.allFinite()) throw InputError("fd_hamiltonian: non-finite potential value");
}

void check_kinetic_coef(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InputError("fd_hamiltonian: kinetic coefficient must be positive");
  }
}

/// Flip sign so the first component of largest magnitude is positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  double mag = std::abs(v(0));
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > mag) {
      mag = m;
      best = i;
    }
  }
  if (v(best) < 0.0) v = -v;
}

}  // namespace

Eigen::MatrixXd fd_hamiltonian(const Grid1D& grid, const Eigen::VectorXd& potential,
                               double kinetic_coef) {
  check_kinetic_coef(kinetic_coef);
  if (potential.size() != grid.n_points) {
    throw InputError("fd_hamiltonian: potential sample count does not match grid");
  }
  check_potential_finite(potential);
  const int n = grid.n_points;
  const double inv_d2 = kinetic_coef / (grid.spacing() * grid.spacing());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = 2.0 * inv_d2 + potential(i);
    if (i + 1 < n) {
      h(i, i + 1) = -inv_d2;
      h(i + 1, i) = -inv_d2;
    }
  }
  return h;
}

Eigen::MatrixXd fd_hamiltonian(const Grid2D& grid, const Eigen::MatrixXd& potential,
                               double coef_fast, double coef_slow, int dense_dim_cap) {
  check_kinetic_coef(coef_fast);
  check_kinetic_coef(coef_slow);
  if (potential.rows() != grid.fast.n_points || potential.cols() != grid.slow.n_points) {
    throw InputError("fd_hamiltonian: potential shape does not match grid");
  }
  check_potential_finite(potential);
  const std::size_t dim = grid.size();
  if (dim > static_cast<std::size_t>(dense_dim_cap)) {
    throw ResourceError("fd_hamiltonian: dense 2D assembly of dimension " + std::to_string(dim) +
                        " exceeds cap " + std::to_string(dense_dim_cap));
  }
  const int nx = grid.fast.n_points;
  const int nX = grid.slow.n_points;
  const double cx = coef_fast / (grid.fast.spacing() * grid.fast.spacing());
  const double cX = coef_slow / (grid.slow.spacing() * grid.slow.spacing());
  const auto idx = [nX](int ix, int iX) { return ix * nX + iX; };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int ix = 0; ix < nx; ++ix) {
    for (int iX = 0; iX < nX; ++iX) {
      const int r = idx(ix, iX);
      h(r, r) = 2.0 * cx + 2.0 * cX + potential(ix, iX);
      if (ix + 1 < nx) {
        h(r, idx(ix + 1, iX)) = -cx;
        h(idx(ix + 1, iX), r) = -cx;
      }
      if (iX + 1 < nX) {
        h(r, idx(ix, iX + 1)) = -cX;
        h(idx(ix, iX + 1), r) = -cX;
      }
    }
  }
  return h;
}

Eigen::MatrixXd apply_fd_hamiltonian(const Grid2D& grid, const Eigen::MatrixXd& potential,
                                     double coef_fast, double coef_slow,
                                     const Eigen::MatrixXd& field) {
  const int nx = grid.fast.n_points;
  const int nX = grid.slow.n_points;
  if (field.rows() != nx || field.cols() != nX) {
    throw InputError("apply_fd_hamiltonian: field shape mismatch");
  }
  const double cx = coef_fast / (grid.fast.spacing() * grid.fast.spacing());
  const double cX = coef_slow / (grid.slow.spacing() * grid.slow.spacing());
  Eigen::MatrixXd out = potential.cwiseProduct(field);
  out += 2.0 * (cx + cX) * field;
  out.topRows(nx - 1) -= cx * field.bottomRows(nx - 1);
  out.bottomRows(nx - 1) -= cx * field.topRows(nx - 1);
  out.leftCols(nX - 1) -= cX * field.rightCols(nX - 1);
  out.rightCols(nX - 1) -= cX * field.leftCols(nX - 1);
  return out;
}

namespace {

void check_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InputError("eigensolve: matrix not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw InputError("eigensolve: matrix asymmetry " + std::to_string(asym / scale) +
                     " exceeds 1e-10 relative");
  }
}

#ifdef SEPMOT_WITH_LAPACK
struct BlasThreadPin {
  BlasThreadPin() { openblas_set_num_threads(1); }
};
#endif

}  // namespace

EigenResult eigensolve(const Eigen::MatrixXd& matrix, int k) {
  check_symmetric(matrix);
  const int n = static_cast<int>(matrix.rows());
  if (k < 1 || k > n) throw InputError("eigensolve: k out of range");

  EigenResult result;
#ifdef SEPMOT_WITH_LAPACK
  // Single BLAS thread keeps results bit-identical across --threads settings.
  static BlasThreadPin pin;
  Eigen::MatrixXd work = matrix;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, k);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(1, k)));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, work.data(), n, 0.0,
                                         0.0, 1, k, 0.0, &found, w.data(), z.data(), n,
                                         isuppz.data());
  if (info != 0 || found != k) {
    throw AccuracyError("eigensolve: LAPACK dsyevr failed with info " + std::to_string(info));
  }
  result.spectrum.eigenvalues = w.head(k);
  result.vectors = z;
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix);
  if (es.info() != Eigen::Success) throw AccuracyError("eigensolve: Eigen solver failed");
  result.spectrum.eigenvalues = es.eigenvalues().head(k);
  result.vectors = es.eigenvectors().leftCols(k);
#endif
  for (int j = 0; j < k; ++j) fix_sign(result.vectors.col(j));
  return result;
}

Eigen::VectorXd eigenvalues_only(const Eigen::MatrixXd& matrix) {
  check_symmetric(matrix);
#ifdef SEPMOT_WITH_LAPACK
  static BlasThreadPin pin;
  const int n = static_cast<int>(matrix.rows());
  Eigen::MatrixXd work = matrix;
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0) throw AccuracyError("eigenvalues_only: LAPACK dsyev failed");
  return w;
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
#endif
}

int tridiagonal_count_below(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                            double bound) {
  const Eigen::Index n = diag.size();
  if (offdiag.size() != n - 1) throw InputError("tridiagonal_count_below: size mismatch");
  // Sturm sequence: count of negative pivots of T - bound*I equals the
  // number of eigenvalues below bound.
  int count = 0;
  double d = diag(0) - bound;
  if (d < 0.0) ++count;
  const double tiny = std::numeric_limits<double>::min();
  for (Eigen::Index i = 1; i < n; ++i) {
    if (d == 0.0) d = tiny;
    d = (diag(i) - bound) - offdiag(i - 1) * offdiag(i - 1) / d;
    if (d < 0.0) ++count;
  }
  return count;
}

double hermite_function(int n, double scale, double x) {
  if (n < 0) throw InputError("hermite_function: negative index");
  if (n > 200) throw UnsupportedError("hermite_function: n > 200 unsupported");
  if (!(scale > 0.0)) throw InputError("hermite_function: scale must be positive");
  const double u = x / scale;
  const double h0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * u * u);
  double prev = h0;
  if (n == 0) return prev / std::sqrt(scale);
  double cur = std::sqrt(2.0) * u * h0;
  for (int m = 2; m <= n; ++m) {
    const double next =
        std::sqrt(2.0 / m) * u * cur - std::sqrt((m - 1.0) / m) * prev;
    prev = cur;
    cur = next;
  }
  return cur / std::sqrt(scale);
}

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw InputError("gauss_legendre: need at least one node");
  nodes.resize(n);
  weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based start point, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes(i) = -x;
    nodes(n - 1 - i) = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights(i) = w;
    weights(n - 1 - i) = w;
  }
}

namespace {

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw NoSolutionError("bisect_root: interval does not bracket a root");
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0 || (hi - lo) < 1e-14 * (1.0 + std::abs(mid))) return mid;
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_minimum(const std::function<double(double)>& f, double lo, double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int iter = 0; iter < 300 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++iter) {
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

double action_with_nodes(const std::function<double(double)>& potential, double energy,
                         double t_lo, double t_hi, int n_nodes) {
  // q = c + r sin(theta) removes the sqrt endpoint kink for generic wells.
  const double c = 0.5 * (t_lo + t_hi);
  const double r = 0.5 * (t_hi - t_lo);
  Eigen::VectorXd nodes, weights;
  gauss_legendre(n_nodes, nodes, weights);
  double sum = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    const double theta = 0.5 * M_PI * nodes(i);
    const double q = c + r * std::sin(theta);
    const double integrand = energy - potential(q);
    sum += weights(i) * std::sqrt(std::max(0.0, integrand)) * r * std::cos(theta) * 0.5 * M_PI;
  }
  return 2.0 * sum;
}

}  // namespace

double action_integral(const std::function<double(double)>& potential, double energy,
                       double q_lo, double q_hi) {
  const double q_min = golden_minimum(potential, q_lo, q_hi);
  const double v_min = potential(q_min);
  if (!(energy > v_min)) throw InputError("action_integral: energy below the well minimum");
  const auto shifted = [&](double q) { return potential(q) - energy; };
  if (shifted(q_lo) < 0.0 || shifted(q_hi) < 0.0) {
    throw InputError("action_integral: turning points escape the search interval");
  }
  const double t_lo = bisect_root(shifted, q_lo, q_min);
  const double t_hi = bisect_root(shifted, q_min, q_hi);
  const double j96 = action_with_nodes(potential, energy, t_lo, t_hi, 96);
  const double j192 = action_with_nodes(potential, energy, t_lo, t_hi, 192);
  if (std::abs(j192 - j96) > 1e-9 * std::max(1.0, std::abs(j192))) {
    throw AccuracyError("action_integral: quadrature did not converge");
  }
  return j192;
}

double sommerfeld_quantize(const std::function<double(double)>& potential, int n,
                           double h_action, double q_lo, double q_hi) {
  if (n < 1) throw InputError("sommerfeld_quantize: quantum number must be >= 1");
  if (!(h_action > 0.0)) throw InputError("sommerfeld_quantize: h_action must be positive");
  const double q_min = golden_minimum(potential, q_lo, q_hi);
  const double v_min = potential(q_min);
  const double v_edge = std::min(potential(q_lo), potential(q_hi));
  const double target = n * h_action;

  double e_lo = v_min + 1e-10 * (1.0 + std::abs(v_min));
  double e_hi = v_edge - 1e-10 * (1.0 + std::abs(v_edge));
  const auto j_of = [&](double e) { return action_integral(potential, e, q_lo, q_hi); };
  if (j_of(e_hi) < target) {
    throw NoSolutionError("sommerfeld_quantize: J(E) does not reach n*h on the search range");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (e_lo + e_hi);
    if (j_of(mid) < target) {
      e_lo = mid;
    } else {
      e_hi = mid;
    }
    if ((e_hi - e_lo) < 1e-12 * (1.0 + std::abs(e_hi))) break;
  }
  return 0.5 * (e_lo + e_hi);
}

}  // namespace sepmot::numerics
