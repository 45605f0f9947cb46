#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sepmot::cli {

/// Parsed key = value config with [section] headers, '#'/';' comments.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::filesystem::path& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback);
  double get(const std::string& section, const std::string& key, double fallback);
  int get(const std::string& section, const std::string& key, int fallback);
  bool get(const std::string& section, const std::string& key, bool fallback);
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback);

  /// Rejects any entry not in the allowed (section, key) set.
  void enforce_schema(const std::map<std::string, std::vector<std::string>>& schema) const;

  /// Every resolved value, including defaults filled in by the getters.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> entries_;
  std::map<std::string, std::string> resolved_;
};

/// Executes one subcommand; returns the process exit code (0 ok, 2 input
/// error, 3 numerical failure). Partial outputs are removed on failure.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const std::filesystem::path& output_dir, int threads);

}  // namespace sepmot::cli
