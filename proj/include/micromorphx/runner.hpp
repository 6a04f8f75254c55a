#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "micromorphx/config.hpp"

namespace mmx {

/// Parsed command-line options shared by all subcommands.
struct CliArgs {
  std::string config_path;  // empty: built-in defaults
  std::string out_dir;      // overrides output.directory when set
  std::optional<std::uint64_t> seed;
  int threads = 0;             // 0: MICROMORPHX_THREADS or library default
  std::string spec = "all";    // estimate-constants: inequality name or "all"
  std::vector<int> levels = {4, 8, 16};
};

/// Applies the thread request (flag beats the MICROMORPHX_THREADS variable)
/// and returns the effective team size.
int resolve_threads(int flag_value);

int cmd_simulate(const CliArgs& args);
int cmd_static_solve(const CliArgs& args);
int cmd_estimate_constants(const CliArgs& args);
int cmd_dispersion(const CliArgs& args);
int cmd_check_params(const CliArgs& args);
int cmd_verify(const CliArgs& args);

/// Dispatch plus error mapping: 0 success, 1 validation error (bad config,
/// bad arguments, invalid parameters), 2 numerical failure.
int run_cli(const std::string& command, const CliArgs& args);

}  // namespace mmx
