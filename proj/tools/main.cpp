#include <CLI11.hpp>

#include "micromorphx/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the relaxed micromorphic continuum"};
  app.require_subcommand(1);

  mmx::CliArgs args;
  std::string levels_list;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "scenario config file");
    sub->add_option("--out", args.out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", args.seed, "RNG seed for random presets");
    sub->add_option("--threads", args.threads, "OpenMP thread count");
    return sub;
  };

  add_common(app.add_subcommand("simulate", "time-step a scenario and write the energy ledger"));
  add_common(app.add_subcommand("static-solve", "solve the stationary system for given data"));
  CLI::App* constants = add_common(app.add_subcommand(
      "estimate-constants", "inequality constants across nested refinement levels"));
  constants->add_option("--spec", args.spec, "inequality name or 'all'");
  constants->add_option("--levels", levels_list, "comma-separated cells-per-axis list");
  add_common(app.add_subcommand("dispersion", "plane-wave frequencies along a wave-vector path"));
  add_common(app.add_subcommand("check-params", "validate material parameters, report as JSON"));
  add_common(app.add_subcommand("verify", "run the built-in invariant suite"));

  CLI11_PARSE(app, argc, argv);

  if (!levels_list.empty()) {
    args.levels.clear();
    std::stringstream in(levels_list);
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        args.levels.push_back(std::stoi(item));
      } catch (...) {
        std::cerr << "error: bad --levels entry '" << item << "'\n";
        return 1;
      }
    }
    if (args.levels.empty()) {
      std::cerr << "error: --levels needs at least one entry\n";
      return 1;
    }
  }

  return mmx::run_cli(app.get_subcommands().front()->get_name(), args);
}
