#include <CLI11.hpp>
#include <clocale>
#include <string>

#include "run_config.hpp"

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"sepmot: separation-of-motion procedures on a fast/slow oscillator model"};
  app.require_subcommand(1);

  struct SubArgs {
    std::string config;
    std::string output = "sepmot_out";
    int threads = 0;
  };

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"exact", "Full 2D eigenpairs of the model Hamiltonian"},
      {"clamped-scan", "Clamped level curves E_n(X) over the slow grid"},
      {"channels", "Coupled-channel energies and derivative couplings"},
      {"hunter", "Exact factorization, potentials U(X) and spike census"},
      {"partition", "Energy-dependent partitioning on the channel operator"},
      {"gcm", "Generator-coordinate (Hill-Wheeler) energies and weights"},
      {"microscope", "Scaled harmonic expansion about a surface minimum"},
      {"rate", "Classical one-way flux rates over a beta scan"},
      {"diagnostics", "Continuum signature: level counts against box size"},
  };

  std::map<std::string, SubArgs> args;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto& a = args[name];
    sub->add_option("--config", a.config, "Run configuration file")->required();
    sub->add_option("--output", a.output, "Output directory");
    sub->add_option("--threads", a.threads, "Worker thread cap (0 = all)");
  }

  CLI11_PARSE(app, argc, argv);
  for (const auto& [name, help] : commands) {
    if (app.got_subcommand(name)) {
      const auto& a = args[name];
      return sepmot::cli::run_command(name, a.config, a.output, a.threads);
    }
  }
  return 1;
}
