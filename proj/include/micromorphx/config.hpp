#pragma once

#include <string>
#include <vector>

#include "micromorphx/dynamics.hpp"

namespace mmx {

/// One parse/validation problem, tied to the input line it came from
/// (line 0: file-level issues such as missing keys).
struct ConfigIssue {
  int line = 0;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  static std::string render(const std::vector<ConfigIssue>& issues);
  std::vector<ConfigIssue> issues_;
};

/// Everything a scenario run needs, from a flat dotted-key text config.
struct ScenarioConfig {
  std::array<int, 3> grid_n = {4, 4, 4};
  std::array<double, 3> grid_lengths = {1.0, 1.0, 1.0};
  MaterialModel material;

  double dt = 0.01;
  double T = 1.0;
  Scheme scheme = Scheme::Midpoint;
  bool allow_unstable = false;

  std::string ic_preset = "zero";  // zero | random
  double ic_amplitude = 1.0;

  Loads loads;

  std::string out_dir = "out";
  int ledger_every = 1;
  int snapshot_every = 0;
  bool write_csv = true;
  bool write_vtk = false;

  std::vector<Vec3> k_path = {Vec3::Zero(), Vec3(3.141592653589793, 0.0, 0.0)};
  int k_samples = 100;

  /// verbatim key/value pairs, echoed into the run manifest
  std::vector<std::pair<std::string, std::string>> raw;
};

/// Parses `key = value` lines ('#' comments, blank lines allowed). Unknown
/// keys, malformed values, and failed material validation are all collected
/// and thrown together as a ConfigError with line numbers. Parameter
/// validation can be skipped so a diagnostic command can inspect an invalid
/// material instead of rejecting it outright.
ScenarioConfig parse_config(const std::string& text, bool validate_material = true);

ScenarioConfig load_config_file(const std::string& path, bool validate_material = true);

}  // namespace mmx
