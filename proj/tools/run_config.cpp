#include "run_config.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sepmot/adiabatic.hpp"
#include "sepmot/csv.hpp"
#include "sepmot/errors.hpp"
#include "sepmot/factorization.hpp"
#include "sepmot/gcm.hpp"
#include "sepmot/marcelin.hpp"
#include "sepmot/microscope.hpp"
#include "sepmot/model.hpp"
#include "sepmot/numerics.hpp"
#include "sepmot/partitioning.hpp"
#include "sepmot/threading.hpp"

namespace sepmot::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw InputError("config line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw InputError("config line " + std::to_string(lineno) + ": empty section name");
      }
      cfg.entries_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw InputError("config line " + std::to_string(lineno) + ": empty key");
    }
    if (section.empty()) {
      throw InputError("config line " + std::to_string(lineno) + ": key outside any section");
    }
    if (!cfg.entries_[section].emplace(key, value).second) {
      throw InputError("config: duplicate key " + section + "." + key);
    }
  }
  return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto s = entries_.find(section);
  return s != entries_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) {
  std::string value = fallback;
  const auto s = entries_.find(section);
  if (s != entries_.end()) {
    const auto k = s->second.find(key);
    if (k != s->second.end()) value = k->second;
  }
  resolved_[section + "." + key] = value;
  return value;
}

double ConfigFile::get(const std::string& section, const std::string& key, double fallback) {
  const std::string raw = get(section, key, format_full(fallback));
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw InputError("config: " + section + "." + key + " is not a number: '" + raw + "'");
  }
}

int ConfigFile::get(const std::string& section, const std::string& key, int fallback) {
  const std::string raw = get(section, key, std::to_string(fallback));
  try {
    std::size_t used = 0;
    const int v = std::stoi(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw InputError("config: " + section + "." + key + " is not an integer: '" + raw + "'");
  }
}

bool ConfigFile::get(const std::string& section, const std::string& key, bool fallback) {
  const std::string raw = get(section, key, std::string(fallback ? "true" : "false"));
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw InputError("config: " + section + "." + key + " is not a boolean: '" + raw + "'");
}

std::vector<double> ConfigFile::get_list(const std::string& section, const std::string& key,
                                         const std::vector<double>& fallback) {
  std::string def;
  for (std::size_t i = 0; i < fallback.size(); ++i) {
    if (i) def += " ";
    def += format_full(fallback[i]);
  }
  const std::string raw = get(section, key, def);
  std::vector<double> out;
  std::istringstream in(raw);
  std::string tok;
  while (in >> tok) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InputError("config: " + section + "." + key + " has a non-numeric entry '" + tok +
                       "'");
    }
  }
  if (out.empty()) throw InputError("config: " + section + "." + key + " is empty");
  return out;
}

void ConfigFile::enforce_schema(
    const std::map<std::string, std::vector<std::string>>& schema) const {
  for (const auto& [section, kv] : entries_) {
    const auto s = schema.find(section);
    if (s == schema.end()) throw InputError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : kv) {
      if (std::find(s->second.begin(), s->second.end(), key) == s->second.end()) {
        throw InputError("config: unknown key " + section + "." + key);
      }
    }
  }
}

namespace {

struct OutputTracker {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> written;

  std::filesystem::path file(const std::string& name) {
    written.push_back(dir / name);
    return written.back();
  }
  void discard_all() {
    for (const auto& p : written) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  }
};

model::ModelSpec read_model(ConfigFile& cfg) {
  model::ModelSpec spec;
  spec.kappa = cfg.get("model", "kappa", 1.0);
  spec.a = cfg.get("model", "a", 0.0);
  const std::string pot = cfg.get("model", "slow_potential", std::string("harmonic"));
  if (pot == "harmonic") {
    spec.slow_potential = model::SlowPotential::harmonic;
  } else if (pot == "double_well") {
    spec.slow_potential = model::SlowPotential::double_well;
  } else {
    throw InputError("config: model.slow_potential must be harmonic or double_well");
  }
  spec.alpha = cfg.get("model", "alpha", 1.0);
  spec.beta = cfg.get("model", "beta", 0.25);
  spec.validate();
  return spec;
}

Grid2D read_grid(ConfigFile& cfg, const model::ModelSpec& spec) {
  const double slow_half_default = std::max(9.0 * spec.kappa, 1.5);
  const double fmin = cfg.get("grid", "fast_min", -7.0);
  const double fmax = cfg.get("grid", "fast_max", 7.0);
  const int fn = cfg.get("grid", "fast_points", 901);
  const double smin = cfg.get("grid", "slow_min", -slow_half_default);
  const double smax = cfg.get("grid", "slow_max", slow_half_default);
  const int sn = cfg.get("grid", "slow_points", 901);
  return Grid2D(Grid1D(fmin, fmax, fn), Grid1D(smin, smax, sn));
}

Grid1D read_slow_grid(ConfigFile& cfg, const model::ModelSpec& spec) {
  const Grid2D g = read_grid(cfg, spec);
  return g.slow;
}

const std::vector<std::string> kModelKeys{"kappa", "a", "slow_potential", "alpha", "beta"};
const std::vector<std::string> kGridKeys{"fast_min", "fast_max", "fast_points",
                                         "slow_min", "slow_max", "slow_points"};

void write_manifest(const OutputTracker& outputs, const ConfigFile& cfg,
                    const std::string& command, double wall_seconds,
                    const std::vector<std::string>& warnings) {
  std::ofstream out(outputs.dir / "manifest.txt");
  out << "tool = sepmot " << kVersion << "\n";
  out << "command = " << command << "\n";
  for (const auto& [key, value] : cfg.resolved()) {
    out << key << " = " << value << "\n";
  }
  out << "wall_time_seconds = " << format_full(wall_seconds) << "\n";
  for (const auto& w : warnings) out << "warning = " << w << "\n";
}

adiabatic::ChannelMode parse_mode(const std::string& mode) {
  if (mode == "diagonal_only") return adiabatic::ChannelMode::diagonal_only;
  if (mode == "adiabatic") return adiabatic::ChannelMode::adiabatic;
  if (mode == "full") return adiabatic::ChannelMode::full;
  throw InputError("config: unknown channel mode '" + mode + "'");
}

// ---------------------------------------------------------------- commands

std::vector<std::string> cmd_exact(ConfigFile& cfg, OutputTracker& outputs) {
  cfg.enforce_schema({{"model", kModelKeys}, {"grid", kGridKeys}, {"exact", {"k"}}});
  const auto spec = read_model(cfg);
  const auto grid = read_grid(cfg, spec);
  const int k = cfg.get("exact", "k", 6);
  const auto sol = model::exact_solve(spec, grid, k);

  std::vector<std::vector<CsvCell>> rows;
  for (int i = 0; i < k; ++i) {
    const bool labelled = i < static_cast<int>(sol.spectrum.labels.size());
    const double closed =
        (spec.slow_potential == model::SlowPotential::harmonic && labelled)
            ? spec.normal_mode_level(sol.spectrum.labels[i][0], sol.spectrum.labels[i][1])
            : std::nan("");
    rows.push_back({static_cast<long long>(i),
                    static_cast<long long>(labelled ? sol.spectrum.labels[i][0] : -1),
                    static_cast<long long>(labelled ? sol.spectrum.labels[i][1] : -1),
                    sol.spectrum.eigenvalues(i), closed});
  }
  write_csv(outputs.file("exact_levels.csv"),
            {"index", "n_plus", "n_minus", "energy", "closed_form"}, rows);
  return sol.warnings;
}

std::vector<std::string> cmd_clamped_scan(ConfigFile& cfg, OutputTracker& outputs) {
  cfg.enforce_schema({{"model", kModelKeys}, {"grid", kGridKeys}, {"scan", {"n_channels"}}});
  const auto spec = read_model(cfg);
  const Grid1D xgrid = read_slow_grid(cfg, spec);
  const int nch = cfg.get("scan", "n_channels", 4);
  const auto scan = model::scan_clamped(spec, xgrid, nch);

  std::vector<std::string> header{"X"};
  for (int n = 0; n < nch; ++n) header.push_back("E_" + std::to_string(n));
  std::vector<std::vector<CsvCell>> rows;
  for (int j = 0; j < xgrid.n_points; ++j) {
    std::vector<CsvCell> row{xgrid.point(j)};
    for (int n = 0; n < nch; ++n) row.push_back(scan.energies(n, j));
    rows.push_back(std::move(row));
  }
  write_csv(outputs.file("scan.csv"), header, rows);
  return {};
}

std::vector<std::string> cmd_channels(ConfigFile& cfg, OutputTracker& outputs) {
  cfg.enforce_schema({{"model", kModelKeys},
                      {"grid", kGridKeys},
                      {"channels", {"k", "n_channels", "mode"}}});
  const auto spec = read_model(cfg);
  const Grid1D xgrid = read_slow_grid(cfg, spec);
  const int k = cfg.get("channels", "k", 4);
  const int nch = cfg.get("channels", "n_channels", 8);
  const std::string mode = cfg.get("channels", "mode", std::string("both"));

  const auto scan = model::scan_clamped(spec, xgrid, nch);
  const auto coupling = adiabatic::coupling_matrix(scan);

  std::vector<std::string> modes;
  if (mode == "both") {
    modes = {"diagonal_only", "full"};
  } else {
    modes = {mode};
  }
  std::vector<std::vector<CsvCell>> rows;
  for (const auto& m : modes) {
    const auto sol = adiabatic::solve_coupled_channels(scan, coupling, spec, k, parse_mode(m));
    for (int i = 0; i < k; ++i) {
      const double closed = spec.slow_potential == model::SlowPotential::harmonic
                                ? spec.normal_mode_spectrum(k).eigenvalues(i)
                                : std::nan("");
      rows.push_back({std::string(m), static_cast<long long>(i), sol.energies.eigenvalues(i),
                      closed});
    }
  }
  write_csv(outputs.file("channels.csv"), {"mode", "index", "energy", "closed_form"}, rows);

  std::vector<std::vector<CsvCell>> crows;
  for (int j = 0; j < xgrid.n_points; ++j) {
    for (int n = 0; n < nch; ++n) {
      for (int m2 = 0; m2 < nch; ++m2) {
        crows.push_back({xgrid.point(j), static_cast<long long>(n),
                         static_cast<long long>(m2), coupling.first(n, m2)(j),
                         coupling.second(n, m2)(j)});
      }
    }
  }
  write_csv(outputs.file("couplings.csv"), {"X", "n", "m", "first_order", "second_order"},
            crows);
  return {};
}

std::vector<std::string> cmd_hunter(ConfigFile& cfg, OutputTracker& outputs) {
  cfg.enforce_schema(
      {{"model", kModelKeys}, {"grid", kGridKeys}, {"hunter", {"states"}}});
  const auto spec = read_model(cfg);
  const auto grid = read_grid(cfg, spec);
  const auto states_list = cfg.get_list("hunter", "states", {0, 1, 2});
  int max_state = 0;
  for (double s : states_list) max_state = std::max(max_state, static_cast<int>(s));

  const auto sol = model::exact_solve(spec, grid, max_state + 1);
  const auto baseline = model::scan_clamped(spec, grid.slow, 1);

  std::vector<std::vector<CsvCell>> rows;
  std::vector<std::vector<CsvCell>> spike_rows;
  for (double sd : states_list) {
    const int s = static_cast<int>(sd);
    const auto fact = factorization::hunter_factorize(sol.states[s]);
    const Eigen::VectorXd u_full =
        factorization::exact_potential(fact, spec, factorization::PotentialVariant::full_internal);
    const Eigen::VectorXd u_clamped =
        factorization::exact_potential(fact, spec, factorization::PotentialVariant::clamped_only);
    for (int j = 0; j < grid.slow.n_points; ++j) {
      rows.push_back({static_cast<long long>(s), grid.slow.point(j), fact.chi.values(j),
                      u_full(j), u_clamped(j), static_cast<long long>(fact.mask[j] ? 1 : 0)});
    }
    for (const auto& [variant, u] :
         {std::pair{std::string("full"), u_full}, std::pair{std::string("clamped"), u_clamped}}) {
      for (double loc : factorization::detect_spikes(u, fact.mask, baseline)) {
        spike_rows.push_back({static_cast<long long>(s), variant, loc});
      }
    }
  }
  write_csv(outputs.file("hunter.csv"), {"state", "X", "chi", "U_full", "U_clamped", "masked"},
            rows);
  write_csv(outputs.file("spikes.csv"), {"state", "variant", "location"}, spike_rows);
  return sol.warnings;
}

std::vector<std::string> cmd_partition(ConfigFile& cfg, OutputTracker& outputs) {
  cfg.enforce_schema({{"model", kModelKeys},
                      {"grid", kGridKeys},
                      {"partition", {"n_channels", "branch"}}});
  const auto spec = read_model(cfg);
  const Grid1D xgrid = read_slow_grid(cfg, spec);
  const int nch = cfg.get("partition", "n_channels", 4);
  const int branch = cfg.get("partition", "branch", 0);

  const auto scan = model::scan_clamped(spec, xgrid, nch);
  const auto coupling = adiabatic::coupling_matrix(scan);
  const Eigen::MatrixXd block =
      adiabatic::channel_block_operator(scan, coupling, spec, adiabatic::ChannelMode::full);
  const auto coupled = numerics::eigensolve(block, branch + 1);

  std::vector<int> p_idx(xgrid.n_points);
  for (int i = 0; i < xgrid.n_points; ++i) p_idx[i] = i;
  const partitioning::PartitionScheme scheme(block, p_idx);
  const auto sol = partitioning::solve_partitioned(
      scheme, branch, coupled.spectrum.eigenvalues(branch) - 0.05);

  std::vector<std::vector<CsvCell>> rows{
      {static_cast<long long>(branch), sol.energy, static_cast<long long>(sol.iterations),
       coupled.spectrum.eigenvalues(branch),
       std::abs(sol.energy - coupled.spectrum.eigenvalues(branch))}};
  write_csv(outputs.file("partition.csv"),
            {"branch", "energy", "iterations", "coupled_ground", "abs_difference"}, rows);
  return {};
}

std::vector<std::string> cmd_gcm(ConfigFile& cfg, OutputTracker& outputs) {
  cfg.enforce_schema({{"model", kModelKeys},
                      {"grid", kGridKeys},
                      {"gcm", {"gamma", "centers_min", "centers_max", "n_centers", "k",
                               "channel"}}});
  const auto spec = read_model(cfg);
  const Grid1D xgrid = read_slow_grid(cfg, spec);
  gcm::GcmBasis basis;
  basis.width = cfg.get("gcm", "gamma", 4.0);
  const double cmin = cfg.get("gcm", "centers_min", -4.0);
  const double cmax = cfg.get("gcm", "centers_max", 4.0);
  const int ncen = cfg.get("gcm", "n_centers", 15);
  basis.channel = cfg.get("gcm", "channel", 0);
  if (ncen < 1) throw InputError("config: gcm.n_centers must be positive");
  for (int i = 0; i < ncen; ++i) {
    basis.centers.push_back(ncen == 1 ? cmin : cmin + (cmax - cmin) * i / (ncen - 1));
  }
  const int k = cfg.get("gcm", "k", 3);

  const auto scan = model::scan_clamped(spec, xgrid, basis.channel + 1);
  const auto kernels = gcm::hill_wheeler_kernels(basis, spec, scan);
  const auto sol = gcm::solve_hill_wheeler(kernels, k);
  const int k_out = static_cast<int>(sol.energies.eigenvalues.size());

  std::vector<std::vector<CsvCell>> erows;
  for (int i = 0; i < k_out; ++i) {
    erows.push_back({static_cast<long long>(i), sol.energies.eigenvalues(i)});
  }
  write_csv(outputs.file("gcm_energies.csv"), {"index", "energy"}, erows);

  std::vector<std::string> header{"center"};
  for (int i = 0; i < k_out; ++i) header.push_back("weight_" + std::to_string(i));
  std::vector<std::vector<CsvCell>> wrows;
  for (int c = 0; c < ncen; ++c) {
    std::vector<CsvCell> row{basis.centers[c]};
    for (int i = 0; i < k_out; ++i) row.push_back(sol.weights(c, i));
    wrows.push_back(std::move(row));
  }
  write_csv(outputs.file("gcm_weights.csv"), header, wrows);
  return {};
}

std::vector<std::string> cmd_microscope(ConfigFile& cfg, OutputTracker& outputs) {
  cfg.enforce_schema({{"model", kModelKeys},
                      {"grid", kGridKeys},
                      {"microscope", {"channel", "levels", "include_channel_term", "start"}}});
  const auto spec = read_model(cfg);
  const int channel = cfg.get("microscope", "channel", 0);
  const auto levels_list = cfg.get_list("microscope", "levels", {0, 1, 2});
  const bool with_channel = cfg.get("microscope", "include_channel_term", true);
  const double start = cfg.get("microscope", "start", 0.5);

  const auto surface = [&](double X) { return spec.clamped_level(channel, X); };
  const auto minimum = microscope::locate_minimum(surface, start);
  const auto expansion =
      microscope::microscope_transform(surface, minimum.location(0), spec.kappa);
  std::vector<int> levels;
  for (double v : levels_list) levels.push_back(static_cast<int>(v));
  const auto rows =
      microscope::asymptotic_levels(expansion, spec, levels, with_channel, channel);

  std::vector<std::vector<CsvCell>> out_rows;
  for (const auto& r : rows) {
    const double exact = spec.slow_potential == model::SlowPotential::harmonic
                             ? spec.normal_mode_level(channel, r.n)
                             : std::nan("");
    out_rows.push_back({static_cast<long long>(r.n), r.order0, r.order2, r.order4,
                        r.order4_channel, r.total(), exact});
  }
  write_csv(outputs.file("microscope.csv"),
            {"n", "order0", "order2", "order4", "order4_channel", "total", "exact"}, out_rows);
  return {};
}

std::vector<std::string> cmd_rate(ConfigFile& cfg, OutputTracker& outputs) {
  cfg.enforce_schema({{"rate", {"shape", "barrier", "well_position", "beta_min", "beta_max",
                                "n_beta", "bath_frequency"}}});
  const std::string shape = cfg.get("rate", "shape", std::string("harmonic"));
  const double barrier = cfg.get("rate", "barrier", 5.0);
  const double beta_min = cfg.get("rate", "beta_min", 1.0);
  const double beta_max = cfg.get("rate", "beta_max", 3.0);
  const int n_beta = cfg.get("rate", "n_beta", 5);
  if (n_beta < 1) throw InputError("config: rate.n_beta must be positive");
  if (!(barrier > 0.0)) throw InputError("config: rate.barrier must be positive");

  marcelin::RateProblem problem;
  problem.q_lo = -12.0;
  problem.q_hi = 12.0;
  if (shape == "harmonic") {
    problem.potential = [](double q) { return q * q; };
    problem.dividing_point = std::sqrt(barrier);
  } else if (shape == "double_well") {
    const double q0 = cfg.get("rate", "well_position", 2.0);
    problem.potential = [barrier, q0](double q) {
      const double u = (q / q0) * (q / q0) - 1.0;
      return barrier * u * u;
    };
    problem.dividing_point = 0.0;
  } else {
    throw InputError("config: rate.shape must be harmonic or double_well");
  }
  const double bath = cfg.get("rate", "bath_frequency", 0.0);
  if (bath > 0.0) problem.bath_frequency = bath;

  std::vector<std::vector<CsvCell>> rows;
  std::vector<double> betas(n_beta);
  for (int i = 0; i < n_beta; ++i) {
    betas[i] = n_beta == 1 ? beta_min : beta_min + (beta_max - beta_min) * i / (n_beta - 1);
  }
  std::vector<std::vector<CsvCell>> results(n_beta);
  parallel_for(n_beta, [&](int i) {
    marcelin::RateProblem p = problem;
    p.beta = betas[i];
    const auto fwd = marcelin::rate_forward(p);
    const auto bwd = marcelin::rate_backward(p);
    results[i] = {betas[i],      fwd.rate,          bwd.rate, fwd.rate - bwd.rate,
                  fwd.prefactor, fwd.exponential_factor};
  });
  for (auto& r : results) rows.push_back(std::move(r));
  write_csv(outputs.file("rate.csv"),
            {"beta", "k_forward", "k_backward", "net", "prefactor", "exponential_factor"}, rows);
  return {};
}

std::vector<std::string> cmd_diagnostics(ConfigFile& cfg, OutputTracker& outputs) {
  cfg.enforce_schema({{"model", kModelKeys},
                      {"diagnostics", {"box_sizes", "threshold", "base_spacing"}}});
  const auto spec = read_model(cfg);
  const auto boxes = cfg.get_list("diagnostics", "box_sizes", {6.0, 9.0, 12.0});
  const double threshold = cfg.get("diagnostics", "threshold", 2.5);
  const double base_spacing = cfg.get("diagnostics", "base_spacing", 0.1);
  const auto diag = model::continuum_diagnostic(spec, boxes, threshold, base_spacing);

  std::vector<std::vector<CsvCell>> rows;
  for (const auto& row : diag.rows) {
    rows.push_back({row.box_size, row.count_clamped_family, row.count_full});
  }
  write_csv(outputs.file("diagnostics.csv"),
            {"box_size", "count_no_slow_kinetic", "count_full"}, rows);
  std::vector<std::string> warnings;
  if (diag.degenerate) {
    warnings.push_back("threshold lies below the clamped-surface minimum; counts degenerate");
  }
  return warnings;
}

}  // namespace

int run_command(const std::string& command, const std::filesystem::path& config_path,
                const std::filesystem::path& output_dir, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  set_max_threads(threads);
  OutputTracker outputs;
  outputs.dir = output_dir;
  try {
    std::filesystem::create_directories(output_dir);
    ConfigFile cfg = ConfigFile::parse_file(config_path);
    std::vector<std::string> warnings;
    if (command == "exact") {
      warnings = cmd_exact(cfg, outputs);
    } else if (command == "clamped-scan") {
      warnings = cmd_clamped_scan(cfg, outputs);
    } else if (command == "channels") {
      warnings = cmd_channels(cfg, outputs);
    } else if (command == "hunter") {
      warnings = cmd_hunter(cfg, outputs);
    } else if (command == "partition") {
      warnings = cmd_partition(cfg, outputs);
    } else if (command == "gcm") {
      warnings = cmd_gcm(cfg, outputs);
    } else if (command == "microscope") {
      warnings = cmd_microscope(cfg, outputs);
    } else if (command == "rate") {
      warnings = cmd_rate(cfg, outputs);
    } else if (command == "diagnostics") {
      warnings = cmd_diagnostics(cfg, outputs);
    } else {
      throw InputError("unknown command " + command);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(outputs, cfg, command, wall, warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return 0;
  } catch (const InputError& e) {
    outputs.discard_all();
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    outputs.discard_all();
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    outputs.discard_all();
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    outputs.discard_all();
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sepmot::cli
