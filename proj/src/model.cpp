#include "sepmot/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "sepmot/errors.hpp"
#include "sepmot/numerics.hpp"
#include "sepmot/threading.hpp"

namespace sepmot::model {

namespace {

constexpr double kBoundaryAmplitudeTol = 1e-6;

Eigen::MatrixXd model_potential(const ModelSpec& spec, const Grid2D& grid) {
  const Eigen::VectorXd x = grid.fast.points();
  const Eigen::VectorXd X = grid.slow.points();
  Eigen::MatrixXd v(grid.fast.n_points, grid.slow.n_points);
  for (int j = 0; j < grid.slow.n_points; ++j) {
    const double vs = spec.slow_potential_value(X(j));
    for (int i = 0; i < grid.fast.n_points; ++i) {
      v(i, j) = x(i) * x(i) + vs + spec.a * x(i) * X(j);
    }
  }
  return v;
}

}  // namespace

void ModelSpec::validate() const {
  if (!(kappa > 0.0) || kappa > 1.0) {
    throw InputError("ModelSpec: kappa must lie in (0, 1]");
  }
  if (slow_potential == SlowPotential::harmonic && std::abs(a) >= 2.0) {
    throw InputError(
        "ModelSpec: |a| >= 2 leaves the clamped surface unconfined in X "
        "(curvature 1 - a^2/4 <= 0); rejected for the harmonic slow potential");
  }
  if (slow_potential == SlowPotential::double_well && (!(alpha > 0.0) || !(beta > 0.0))) {
    throw InputError("ModelSpec: double-well parameters alpha, beta must be positive");
  }
  if (!std::isfinite(a)) throw InputError("ModelSpec: coupling a must be finite");
}

double ModelSpec::slow_potential_value(double X) const {
  if (slow_potential == SlowPotential::harmonic) return X * X;
  return -alpha * X * X + beta * X * X * X * X;
}

double ModelSpec::clamped_level(int n, double X) const {
  return 2.0 * (n + 0.5) + slow_potential_value(X) - 0.25 * a * a * X * X;
}

std::pair<double, double> ModelSpec::normal_mode_frequencies() const {
  if (slow_potential != SlowPotential::harmonic) {
    throw InputError("normal_mode_frequencies: closed form exists only for the harmonic model");
  }
  const double k4 = std::pow(kappa, 4);
  // (s - 4)(s - 4 k4) = 4 a^2 k4
  const double b = 4.0 + 4.0 * k4;
  const double c = 16.0 * k4 - 4.0 * a * a * k4;
  const double disc = std::sqrt(b * b - 4.0 * c);
  const double s_plus = 0.5 * (b + disc);
  const double s_minus = 0.5 * (b - disc);
  return {std::sqrt(s_plus), std::sqrt(s_minus)};
}

double ModelSpec::normal_mode_level(int n_plus, int n_minus) const {
  const auto [wp, wm] = normal_mode_frequencies();
  return wp * (n_plus + 0.5) + wm * (n_minus + 0.5);
}

Spectrum ModelSpec::normal_mode_spectrum(int n_levels) const {
  const auto [wp, wm] = normal_mode_frequencies();
  // Enumerate enough of the (n+, n-) lattice to cover the lowest n_levels.
  const int span = n_levels + 2 + static_cast<int>(n_levels * wp / std::max(wm, 1e-12));
  std::vector<std::tuple<double, int, int>> levels;
  for (int np = 0; np <= n_levels; ++np) {
    for (int nm = 0; nm <= std::min(span, 4000); ++nm) {
      levels.emplace_back(wp * (np + 0.5) + wm * (nm + 0.5), np, nm);
    }
  }
  std::sort(levels.begin(), levels.end());
  Spectrum s;
  s.eigenvalues.resize(n_levels);
  s.labels.resize(n_levels);
  for (int i = 0; i < n_levels; ++i) {
    s.eigenvalues(i) = std::get<0>(levels[i]);
    s.labels[i] = {std::get<1>(levels[i]), std::get<2>(levels[i])};
  }
  return s;
}

namespace {

/// Attach (n+, n-) labels by pairing the sorted grid levels with the sorted
/// closed-form ladder (harmonic case only).
void label_with_normal_modes(const ModelSpec& spec, Spectrum& spectrum) {
  if (spec.slow_potential != SlowPotential::harmonic) return;
  const int k = static_cast<int>(spectrum.eigenvalues.size());
  const Spectrum closed = spec.normal_mode_spectrum(k);
  spectrum.labels = closed.labels;
}

void check_boundary_amplitude(const WaveField2D& state, int state_index,
                              std::vector<std::string>& warnings) {
  const auto& v = state.values;
  const double peak = v.cwiseAbs().maxCoeff();
  const double edge = std::max(std::max(v.row(0).cwiseAbs().maxCoeff(),
                                        v.row(v.rows() - 1).cwiseAbs().maxCoeff()),
                               std::max(v.col(0).cwiseAbs().maxCoeff(),
                                        v.col(v.cols() - 1).cwiseAbs().maxCoeff()));
  if (edge > kBoundaryAmplitudeTol * peak) {
    warnings.push_back("state " + std::to_string(state_index) +
                       ": boundary amplitude " + std::to_string(edge / peak) +
                       " of peak exceeds 1e-6; enlarge the box");
  }
}

ExactSolution exact_solve_dense(const ModelSpec& spec, const Grid2D& grid, int k) {
  const Eigen::MatrixXd v = model_potential(spec, grid);
  const double k4 = std::pow(spec.kappa, 4);
  const Eigen::MatrixXd h = numerics::fd_hamiltonian(grid, v, 1.0, k4);
  auto eig = numerics::eigensolve(h, k);
  ExactSolution out;
  out.spectrum = std::move(eig.spectrum);
  label_with_normal_modes(spec, out.spectrum);
  const int nx = grid.fast.n_points;
  const int nX = grid.slow.n_points;
  for (int j = 0; j < k; ++j) {
    Eigen::MatrixXd field(nx, nX);
    for (int ix = 0; ix < nx; ++ix) {
      field.row(ix) = eig.vectors.col(j).segment(ix * nX, nX).transpose();
    }
    WaveField2D w = make_wavefield(grid, std::move(field));
    normalize(w);
    check_boundary_amplitude(w, j, out.warnings);
    out.states.push_back(std::move(w));
  }
  return out;
}

/// Deterministic sign fix on a 2D field; scans in the same ix-major order as
/// the flattened dense path so both paths share one convention.
void fix_field_sign(Eigen::MatrixXd& f) {
  Eigen::Index bi = 0, bj = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
      const double m = std::abs(f(i, j));
      if (m > mag) {
        mag = m;
        bi = i;
        bj = j;
      }
    }
  }
  if (f(bi, bj) < 0.0) f = -f;
}

ExactSolution exact_solve_product_basis(const ModelSpec& spec, const Grid2D& grid, int k) {
  const double k4 = std::pow(spec.kappa, 4);
  const Eigen::VectorXd x = grid.fast.points();
  const Eigen::VectorXd X = grid.slow.points();

  // 1D factor Hamiltonians carry the whole fast and slow potentials; only
  // the bilinear coupling a*x*X is off-diagonal in the product basis.
  const Eigen::MatrixXd h_fast =
      numerics::fd_hamiltonian(grid.fast, x.cwiseAbs2(), 1.0);
  Eigen::VectorXd vs(grid.slow.n_points);
  for (int j = 0; j < grid.slow.n_points; ++j) vs(j) = spec.slow_potential_value(X(j));
  const Eigen::MatrixXd h_slow = numerics::fd_hamiltonian(grid.slow, vs, k4);

  const Eigen::MatrixXd v = model_potential(spec, grid);
  const double residual_tol = 5e-6;

  std::string last_failure;
  for (const auto [mf_want, ms_extra] : {std::pair{16, 34}, std::pair{22, 60}, std::pair{28, 96}}) {
    const int m_fast = std::min(grid.fast.n_points - 2, mf_want);
    const int m_slow = std::min(grid.slow.n_points - 2, std::max(k + ms_extra, ms_extra));
    auto fast_eig = numerics::eigensolve(h_fast, m_fast);
    auto slow_eig = numerics::eigensolve(h_slow, m_slow);

    const Eigen::MatrixXd x_mat =
        fast_eig.vectors.transpose() * x.asDiagonal() * fast_eig.vectors;
    const Eigen::MatrixXd X_mat =
        slow_eig.vectors.transpose() * X.asDiagonal() * slow_eig.vectors;

    const int dim = m_fast * m_slow;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < m_fast; ++i) {
      for (int j = 0; j < m_slow; ++j) {
        h(i * m_slow + j, i * m_slow + j) =
            fast_eig.spectrum.eigenvalues(i) + slow_eig.spectrum.eigenvalues(j);
      }
    }
    for (int i = 0; i < m_fast; ++i) {
      for (int ip = 0; ip < m_fast; ++ip) {
        const double cx = spec.a * x_mat(i, ip);
        if (cx == 0.0) continue;
        h.block(i * m_slow, ip * m_slow, m_slow, m_slow) += cx * X_mat;
      }
    }

    auto eig = numerics::eigensolve(h, k);
    ExactSolution out;
    out.spectrum = std::move(eig.spectrum);
    label_with_normal_modes(spec, out.spectrum);
    out.states.resize(k);
    std::vector<double> residuals(k);
    parallel_for(k, [&](int j) {
      Eigen::MatrixXd coef(m_fast, m_slow);
      for (int i = 0; i < m_fast; ++i) {
        coef.row(i) = eig.vectors.col(j).segment(i * m_slow, m_slow).transpose();
      }
      Eigen::MatrixXd field = fast_eig.vectors * coef * slow_eig.vectors.transpose();
      fix_field_sign(field);
      WaveField2D w = make_wavefield(grid, std::move(field));
      normalize(w);
      const Eigen::MatrixXd hw = numerics::apply_fd_hamiltonian(grid, v, 1.0, k4, w.values);
      const double lambda = out.spectrum.eigenvalues(j);
      residuals[j] = std::sqrt(trapezoid(grid, (hw - lambda * w.values).cwiseAbs2().eval()));
      out.states[j] = std::move(w);
    });
    bool converged = true;
    for (int j = 0; j < k; ++j) {
      if (residuals[j] > residual_tol * std::max(1.0, std::abs(out.spectrum.eigenvalues(j)))) {
        converged = false;
        last_failure = "state " + std::to_string(j) + " residual " + std::to_string(residuals[j]);
        break;
      }
    }
    if (!converged) continue;
    for (int j = 0; j < k; ++j) check_boundary_amplitude(out.states[j], j, out.warnings);
    return out;
  }
  throw AccuracyError("exact_solve: product-basis projection did not converge (" + last_failure +
                      "); enlarge the grid box or refine the spacing");
}

}  // namespace

ExactSolution exact_solve(const ModelSpec& spec, const Grid2D& grid, int k) {
  spec.validate();
  if (k < 1) throw InputError("exact_solve: k must be >= 1");
  if (grid.size() <= 3600) return exact_solve_dense(spec, grid, k);
  return exact_solve_product_basis(spec, grid, k);
}

double fd_residual(const ModelSpec& spec, const WaveField2D& state, double energy) {
  const Eigen::MatrixXd v = model_potential(spec, state.grid);
  const double k4 = std::pow(spec.kappa, 4);
  const Eigen::MatrixXd hw =
      numerics::apply_fd_hamiltonian(state.grid, v, 1.0, k4, state.values);
  return std::sqrt(trapezoid(state.grid, (hw - energy * state.values).cwiseAbs2().eval()));
}

ClampedSolution clamped_solve(const ModelSpec& spec, double X, int k, const Grid1D& fast_grid) {
  spec.validate();
  if (!std::isfinite(X)) throw InputError("clamped_solve: X must be finite");
  if (k < 1) throw InputError("clamped_solve: k must be >= 1");
  ClampedSolution out;
  out.spectrum.eigenvalues.resize(k);
  const Eigen::VectorXd x = fast_grid.points();
  for (int n = 0; n < k; ++n) {
    out.spectrum.eigenvalues(n) = spec.clamped_level(n, X);
    Eigen::VectorXd vals(fast_grid.n_points);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < fast_grid.n_points; ++i) {
      vals(i) = sign * numerics::hermite_function(n, 1.0, x(i) + 0.5 * spec.a * X);
    }
    out.channels.push_back(make_wavefield(fast_grid, std::move(vals)));
  }
  return out;
}

ClampedSolution clamped_solve_fd(const ModelSpec& spec, double X, int k,
                                 const Grid1D& fast_grid) {
  spec.validate();
  const Eigen::VectorXd x = fast_grid.points();
  const double vs = spec.slow_potential_value(X);
  Eigen::VectorXd v(fast_grid.n_points);
  for (int i = 0; i < fast_grid.n_points; ++i) {
    v(i) = x(i) * x(i) + spec.a * X * x(i) + vs;
  }
  auto eig = numerics::eigensolve(numerics::fd_hamiltonian(fast_grid, v, 1.0), k);
  ClampedSolution out;
  out.spectrum = std::move(eig.spectrum);
  const double inv_sqrt_d = 1.0 / std::sqrt(fast_grid.spacing());
  for (int n = 0; n < k; ++n) {
    WaveField1D w = make_wavefield(fast_grid, eig.vectors.col(n) * inv_sqrt_d);
    normalize(w);
    out.channels.push_back(std::move(w));
  }
  return out;
}

Grid1D default_fast_grid(const ModelSpec& spec, const Grid1D& X_grid, int n_channels) {
  const double x_extent = std::max(std::abs(X_grid.x_min), std::abs(X_grid.x_max));
  const double displacement = 0.5 * std::abs(spec.a) * x_extent;
  const double half = 6.5 + std::sqrt(2.0 * n_channels + 1.0) + displacement;
  const int n = std::max(8, static_cast<int>(std::ceil(2.0 * half / 0.02)) + 1);
  return Grid1D(-half, half, n);
}

AdiabaticScan scan_clamped(const ModelSpec& spec, const Grid1D& X_grid, int n_channels) {
  spec.validate();
  if (n_channels < 1) throw InputError("scan_clamped: need at least one channel");
  AdiabaticScan scan;
  scan.spec = spec;
  scan.slow = X_grid;
  scan.fast = default_fast_grid(spec, X_grid, n_channels);
  scan.energies.resize(n_channels, X_grid.n_points);
  scan.channels.assign(n_channels, Eigen::MatrixXd(scan.fast.n_points, X_grid.n_points));
  const Eigen::VectorXd x = scan.fast.points();
  const Eigen::VectorXd X = X_grid.points();
  parallel_for(X_grid.n_points, [&](int j) {
    for (int n = 0; n < n_channels; ++n) {
      scan.energies(n, j) = spec.clamped_level(n, X(j));
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      for (int i = 0; i < scan.fast.n_points; ++i) {
        scan.channels[n](i, j) =
            sign * numerics::hermite_function(n, 1.0, x(i) + 0.5 * spec.a * X(j));
      }
    }
  });
  return scan;
}

AdiabaticScan scan_clamped_fd(const ModelSpec& spec, const Grid1D& X_grid, int n_channels,
                              const Grid1D& fast_grid) {
  spec.validate();
  if (n_channels < 1) throw InputError("scan_clamped_fd: need at least one channel");
  AdiabaticScan scan;
  scan.spec = spec;
  scan.slow = X_grid;
  scan.fast = fast_grid;
  scan.energies.resize(n_channels, X_grid.n_points);
  scan.channels.assign(n_channels, Eigen::MatrixXd(fast_grid.n_points, X_grid.n_points));

  std::vector<ClampedSolution> solutions(X_grid.n_points);
  parallel_for(X_grid.n_points, [&](int j) {
    solutions[j] = clamped_solve_fd(spec, X_grid.point(j), n_channels, fast_grid);
  });
  const Eigen::VectorXd wx = fast_grid.trapezoid_weights();
  for (int j = 0; j < X_grid.n_points; ++j) {
    for (int n = 0; n < n_channels; ++n) {
      scan.energies(n, j) = solutions[j].spectrum.eigenvalues(n);
      Eigen::VectorXd vals = solutions[j].channels[n].values;
      if (j > 0) {
        const double overlap = wx.dot(vals.cwiseProduct(scan.channels[n].col(j - 1)));
        if (std::abs(overlap) < 0.5) {
          throw PhaseTrackingError("scan_clamped_fd: channel " + std::to_string(n) +
                                   " overlap " + std::to_string(std::abs(overlap)) +
                                   " < 0.5 between X points " + std::to_string(j - 1) + " and " +
                                   std::to_string(j) + "; refine the X grid");
        }
        if (overlap < 0.0) vals = -vals;
      }
      scan.channels[n].col(j) = vals;
    }
  }
  return scan;
}

DirectIntegralSpectrum direct_integral_spectrum(const AdiabaticScan& scan) {
  if (scan.n_channels() < 1 || scan.energies.cols() < 1) {
    throw InputError("direct_integral_spectrum: empty scan");
  }
  DirectIntegralSpectrum out;
  out.channel_onsets.resize(scan.n_channels());
  for (int n = 0; n < scan.n_channels(); ++n) {
    out.channel_onsets[n] = scan.energies.row(n).minCoeff();
  }
  out.spectrum.eigenvalues.resize(0);
  out.spectrum.continuum_onset = out.channel_onsets[0];
  return out;
}

ContinuumDiagnostic continuum_diagnostic(const ModelSpec& spec,
                                         const std::vector<double>& box_sizes, double threshold,
                                         double base_spacing) {
  spec.validate();
  if (box_sizes.size() < 3) throw InputError("continuum_diagnostic: need at least 3 box sizes");
  for (std::size_t i = 1; i < box_sizes.size(); ++i) {
    if (!(box_sizes[i] > box_sizes[i - 1])) {
      throw InputError("continuum_diagnostic: box sizes must increase");
    }
  }
  ContinuumDiagnostic out;
  const double L0 = box_sizes.front();

  // Degeneracy check: a threshold below the clamped-surface minimum counts
  // nothing on either operator.
  {
    Grid1D probe(-L0, L0, 801);
    double emin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < probe.n_points; ++j) {
      emin = std::min(emin, spec.clamped_level(0, probe.point(j)));
    }
    out.degenerate = threshold < emin;
  }

  out.rows.resize(box_sizes.size());
  parallel_for(static_cast<int>(box_sizes.size()), [&](int bi) {
    const double L = box_sizes[bi];
    // Spacing tightens as 1/L so larger boxes also resolve more fibers.
    const double dX = base_spacing * L0 / L;
    const int nX = std::max(9, static_cast<int>(std::round(2.0 * L / dX)) + 1);
    const Grid1D Xg(-L, L, nX);
    const int nx = std::max(9, static_cast<int>(std::round(2.0 * L / 0.05)) + 1);
    const Grid1D xg(-L, L, nx);
    const Eigen::VectorXd x = xg.points();
    const double inv_d2 = 1.0 / (xg.spacing() * xg.spacing());
    const Eigen::VectorXd off = Eigen::VectorXd::Constant(nx - 1, -inv_d2);

    // (i) no slow kinetic energy: block diagonal over X fibers; count each
    // fiber's clamped levels below threshold by Sturm sequence.
    long long count_i = 0;
    for (int j = 0; j < nX; ++j) {
      const double X = Xg.point(j);
      const double vs = spec.slow_potential_value(X);
      Eigen::VectorXd diag(nx);
      for (int i = 0; i < nx; ++i) {
        diag(i) = 2.0 * inv_d2 + x(i) * x(i) + spec.a * X * x(i) + vs;
      }
      count_i += numerics::tridiagonal_count_below(diag, off, threshold);
    }

    // (ii) full Hamiltonian on the same box.
    const int nx_full = std::max(9, static_cast<int>(std::round(2.0 * L / 0.05)) + 1);
    const int nX_full = std::max(9, static_cast<int>(std::round(2.0 * L / dX)) + 1);
    const Grid2D box(Grid1D(-L, L, nx_full), Grid1D(-L, L, nX_full));
    int k_ask = 12;
    long long count_ii = 0;
    for (;;) {
      const ExactSolution sol = exact_solve(spec, box, k_ask);
      count_ii = 0;
      for (Eigen::Index i = 0; i < sol.spectrum.eigenvalues.size(); ++i) {
        if (sol.spectrum.eigenvalues(i) < threshold) ++count_ii;
      }
      if (count_ii < k_ask || k_ask > 256) break;
      k_ask *= 2;
    }
    out.rows[bi] = {L, count_i, count_ii};
  });
  return out;
}

}  // namespace sepmot::model
