#include "micromorphx/runner.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <json.hpp>

#include "micromorphx/dispersion.hpp"
#include "micromorphx/dynamics.hpp"
#include "micromorphx/io.hpp"
#include "micromorphx/statics.hpp"

namespace mmx {

namespace fs = std::filesystem;

int resolve_threads(int flag_value) {
  int want = flag_value;
  if (want <= 0) {
    if (const char* env = std::getenv("MICROMORPHX_THREADS")) want = std::atoi(env);
  }
  if (want > 0) omp_set_num_threads(want);
  return omp_get_max_threads();
}

namespace {

ScenarioConfig load_cfg(const CliArgs& args, bool validate_material = true) {
  ScenarioConfig cfg;
  if (!args.config_path.empty()) cfg = load_config_file(args.config_path, validate_material);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  return cfg;
}

std::uint64_t pick_seed(const CliArgs& args) { return args.seed.value_or(42); }

void fill_random(VectorXd& field, const DofMap& map, std::mt19937_64& gen, double amp) {
  std::normal_distribution<double> dist(0.0, amp);
  for (int i = 0; i < field.size(); ++i) field[i] = dist(gen);
  map.apply_bc(field);
}

State initial_state(const SystemMatrices& sm, const ScenarioConfig& cfg, std::uint64_t seed) {
  State s = zero_state(sm);
  if (cfg.ic_preset == "random") {
    std::mt19937_64 gen(seed);
    fill_random(s.u, sm.map_u, gen, cfg.ic_amplitude);
    fill_random(s.v, sm.map_u, gen, cfg.ic_amplitude);
    fill_random(s.P, sm.map_P, gen, cfg.ic_amplitude);
    fill_random(s.Pdot, sm.map_P, gen, cfg.ic_amplitude);
  }
  return s;
}

std::string snapshot_name(const std::string& dir, int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "state_%06d.vtk", step);
  return (fs::path(dir) / buf).string();
}

void pass_fail(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name;
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << "\n";
}

IsotropicModuli random_valid_moduli(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> pos(0.2, 2.0);
  std::uniform_real_distribution<double> lam(-0.2, 1.0);
  IsotropicModuli m;
  do {
    m.mu_e = pos(gen);
    m.lambda_e = lam(gen);
  } while (2.0 * m.mu_e + 3.0 * m.lambda_e <= 1e-3);
  do {
    m.mu_h = pos(gen);
    m.lambda_h = lam(gen);
  } while (2.0 * m.mu_h + 3.0 * m.lambda_h <= 1e-3);
  m.mu_c = (gen() & 1) ? pos(gen) : 0.0;
  m.alpha_1 = pos(gen);
  m.alpha_2 = pos(gen);
  m.alpha_3 = pos(gen);
  return m;
}

}  // namespace

int cmd_simulate(const CliArgs& args) {
  const ScenarioConfig cfg = load_cfg(args);
  const std::uint64_t seed = pick_seed(args);
  fs::create_directories(cfg.out_dir);

  const Grid grid = build_grid(cfg.grid_n, cfg.grid_lengths);
  const SystemMatrices sm = assemble_system(grid, cfg.material);
  std::cout << "grid " << grid.nx << "x" << grid.ny << "x" << grid.nz << ", " << sm.n
            << " free dofs, variant " << variant_name(cfg.material.variant) << "\n";

  RunOptions opts;
  opts.dt = cfg.dt;
  opts.T = cfg.T;
  opts.scheme = cfg.scheme;
  opts.ledger_every = cfg.ledger_every;
  opts.allow_unstable = cfg.allow_unstable;
  if (cfg.write_vtk && cfg.snapshot_every > 0) {
    opts.snapshot_every = cfg.snapshot_every;
    opts.on_snapshot = [&](const State& s, int step) {
      write_snapshot(snapshot_name(cfg.out_dir, step), sm, s);
    };
  }

  const RunResult result = run(sm, initial_state(sm, cfg, seed), cfg.loads, opts);

  if (cfg.write_csv)
    write_ledger_csv((fs::path(cfg.out_dir) / "energy.csv").string(), result.ledger);
  if (cfg.write_vtk)
    write_snapshot((fs::path(cfg.out_dir) / "final.vtk").string(), sm, result.final_state);
  write_manifest((fs::path(cfg.out_dir) / "manifest.json").string(), cfg, seed,
                 omp_get_max_threads());

  const EnergyRow& last = result.ledger.rows.back();
  std::cout << "t = " << last.t << ", total energy " << format_full(last.total)
            << ", max relative drift " << format_full(result.max_drift_rel) << "\n";
  return 0;
}

int cmd_static_solve(const CliArgs& args) {
  const ScenarioConfig cfg = load_cfg(args);
  const std::uint64_t seed = pick_seed(args);
  fs::create_directories(cfg.out_dir);

  const Grid grid = build_grid(cfg.grid_n, cfg.grid_lengths);
  const SystemMatrices sm = assemble_system(grid, cfg.material);

  ResolventRhs rhs;
  rhs.u_star = VectorXd::Zero(sm.map_u.n_full());
  rhs.v_star = VectorXd::Zero(sm.map_u.n_full());
  rhs.P_star = VectorXd::Zero(sm.map_P.n_full());
  rhs.K_star = VectorXd::Zero(sm.map_P.n_full());
  if (cfg.ic_preset == "random") {
    std::mt19937_64 gen(seed);
    fill_random(rhs.u_star, sm.map_u, gen, cfg.ic_amplitude);
    fill_random(rhs.v_star, sm.map_u, gen, cfg.ic_amplitude);
    fill_random(rhs.P_star, sm.map_P, gen, cfg.ic_amplitude);
    fill_random(rhs.K_star, sm.map_P, gen, cfg.ic_amplitude);
  }

  const ResolventSolution sol = solve_resolvent(sm, rhs);

  const VectorXd q = sm.pack(sol.u, sol.P);
  const VectorXd p = sm.pack(sol.v, sol.K);
  VectorXd w(2 * sm.n);
  w << q, p;
  const double x_norm = std::sqrt(std::max(0.0, inner_product_X(sm, w, w)));

  nlohmann::ordered_json j;
  j["cg_iterations"] = sol.cg_iterations;
  j["cg_residual"] = sol.cg_residual;
  j["residual_X"] = sol.residual_X;
  j["solution_norm_X"] = x_norm;
  {
    std::ofstream out(fs::path(cfg.out_dir) / "static.json");
    out << j.dump(2) << "\n";
  }
  if (cfg.write_vtk) {
    State s;
    s.u = sol.u;
    s.v = sol.v;
    s.P = sol.P;
    s.Pdot = sol.K;
    write_snapshot((fs::path(cfg.out_dir) / "static.vtk").string(), sm, s);
  }
  write_manifest((fs::path(cfg.out_dir) / "manifest.json").string(), cfg, seed,
                 omp_get_max_threads());

  std::cout << "stationary solve: " << sol.cg_iterations << " CG iterations, relative residual "
            << format_full(sol.residual_X) << "\n";
  return 0;
}

int cmd_estimate_constants(const CliArgs& args) {
  const ScenarioConfig cfg = load_cfg(args);
  fs::create_directories(cfg.out_dir);

  std::vector<InequalityTag> tags;
  if (args.spec == "all") {
    tags = all_tags();
  } else if (auto tag = tag_from_name(args.spec)) {
    tags = {*tag};
  } else {
    throw std::invalid_argument("unknown inequality '" + args.spec + "'");
  }

  std::vector<Grid> grids;
  for (int level : args.levels) grids.push_back(build_grid({level, level, level}, cfg.grid_lengths));

  std::vector<ConstantEstimate> rows;
  for (InequalityTag tag : tags) {
    const RefinementStudy study = refinement_study(tag, grids);
    for (const ConstantEstimate& row : study.rows) rows.push_back(row);
    const ConstantEstimate& finest = study.rows.back();
    std::cout << tag_name(tag) << ": constant " << format_full(finest.constant) << " at "
              << finest.n[0] << "^3, verdict " << study.verdict << "\n";
  }

  write_constants_csv((fs::path(cfg.out_dir) / "constants.csv").string(), rows);
  write_manifest((fs::path(cfg.out_dir) / "manifest.json").string(), cfg, pick_seed(args),
                 omp_get_max_threads());
  return 0;
}

int cmd_dispersion(const CliArgs& args) {
  const ScenarioConfig cfg = load_cfg(args);
  fs::create_directories(cfg.out_dir);

  const std::vector<DispersionPoint> points =
      dispersion_curves(cfg.k_path, cfg.k_samples, cfg.material);
  write_dispersion_csv((fs::path(cfg.out_dir) / "dispersion.csv").string(), points);
  write_manifest((fs::path(cfg.out_dir) / "manifest.json").string(), cfg, pick_seed(args),
                 omp_get_max_threads());

  std::cout << points.size() << " wave vectors, |k| up to "
            << format_full(points.back().k_mag) << "\n";
  return 0;
}

int cmd_check_params(const CliArgs& args) {
  const ScenarioConfig cfg = load_cfg(args, /*validate_material=*/false);
  const ValidationReport report = cfg.material.validate();

  nlohmann::ordered_json j;
  j["variant"] = variant_name(cfg.material.variant);
  j["ok"] = report.ok;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const ParameterCheck& c : report.checks)
    checks.push_back({{"condition", c.condition}, {"value", c.value}, {"ok", c.ok}});
  j["checks"] = checks;
  std::cout << j.dump(2) << "\n";

  fs::create_directories(cfg.out_dir);
  {
    std::ofstream out(fs::path(cfg.out_dir) / "params.json");
    out << j.dump(2) << "\n";
  }
  write_manifest((fs::path(cfg.out_dir) / "manifest.json").string(), cfg, pick_seed(args),
                 omp_get_max_threads());
  return report.ok ? 0 : 1;
}

int cmd_verify(const CliArgs& args) {
  const std::uint64_t seed = pick_seed(args);
  bool all_ok = true;
  auto record = [&](bool ok, const std::string& name, const std::string& detail) {
    pass_fail(ok, name, detail);
    all_ok = all_ok && ok;
  };

  {
    const ValidationReport good = validate_parameters(IsotropicModuli{});
    IsotropicModuli bad_mu;
    bad_mu.mu_e = -1.0;
    IsotropicModuli bad_couple;
    bad_couple.mu_c = -0.1;
    IsotropicModuli soft;  // negative lambda_h but bulk term still positive
    soft.lambda_h = -0.6;
    const bool ok = good.ok && !validate_parameters(bad_mu).ok &&
                    !validate_parameters(bad_couple).ok && validate_parameters(soft).ok;
    record(ok, "parameter validation", "");
  }

  const Grid grid = build_grid({4, 4, 4});
  MaterialModel material;
  const SystemMatrices sm = assemble_system(grid, material);

  {
    const double ratio = check_dissipativity(sm, 20, seed);
    record(ratio <= 1e-10, "dissipativity",
           "max |(Aw,w)|/(w,w) = " + format_full(ratio));
  }

  {
    ScenarioConfig cfg;
    cfg.ic_preset = "random";
    cfg.ic_amplitude = 0.1;
    RunOptions opts;
    opts.dt = 0.01;
    opts.T = 0.5;
    const RunResult result = run(sm, initial_state(sm, cfg, seed), Loads{}, opts);
    record(result.max_drift_rel <= 1e-9, "energy conservation",
           "relative drift = " + format_full(result.max_drift_rel));
  }

  {
    std::mt19937_64 gen(seed + 1);
    VectorXd u = VectorXd::Zero(sm.map_u.n_full());
    VectorXd P = VectorXd::Zero(sm.map_P.n_full());
    fill_random(u, sm.map_u, gen, 1.0);
    fill_random(P, sm.map_P, gen, 1.0);
    const VectorXd q = sm.pack(u, P);
    VectorXd w0(2 * sm.n);
    w0 << q, VectorXd::Zero(sm.n);
    // w* = (I - A) w for w = (q, 0): position part q, momentum part M^{-1} K q.
    const VectorXd Aw = generator_apply(sm, w0);
    ResolventRhs rhs;
    rhs.u_star = u;
    rhs.P_star = P;
    VectorXd vs, Ks;
    sm.unpack(-Aw.tail(sm.n), vs, Ks);
    rhs.v_star = vs;
    rhs.K_star = Ks;
    const ResolventSolution sol = solve_resolvent(sm, rhs);
    VectorXd diff(2 * sm.n);
    diff << sm.pack(sol.u, sol.P) - q, sm.pack(sol.v, sol.K);
    const double rel =
        std::sqrt(inner_product_X(sm, diff, diff) / inner_product_X(sm, w0, w0));
    record(rel <= 1e-8, "resolvent recovery", "relative X error = " + format_full(rel));
  }

  {
    std::mt19937_64 gen(seed + 2);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      MaterialModel mat;
      mat.iso = random_valid_moduli(gen);
      const Mat12c S = symbol_matrix(Vec3::Zero(), mat);
      Eigen::SelfAdjointEigenSolver<Mat12c> sym_eig(S);

      const ChannelWeights W = mat.weights();
      Eigen::Matrix<double, 12, 12> block = Eigen::Matrix<double, 12, 12>::Zero();
      block.block<9, 9>(3, 3) = W.C + W.H;
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 12, 12>> dense_eig(block);

      const double scale = std::max(1.0, dense_eig.eigenvalues().cwiseAbs().maxCoeff());
      worst = std::max(worst,
                       (sym_eig.eigenvalues() - dense_eig.eigenvalues()).cwiseAbs().maxCoeff() /
                           scale);
    }
    record(worst <= 1e-12, "cut-off frequencies", "max deviation = " + format_full(worst));
  }

  std::cout << (all_ok ? "verify: all checks passed" : "verify: FAILURES above") << "\n";
  return all_ok ? 0 : 2;
}

int run_cli(const std::string& command, const CliArgs& args) {
  try {
    resolve_threads(args.threads);
    if (command == "simulate") return cmd_simulate(args);
    if (command == "static-solve") return cmd_static_solve(args);
    if (command == "estimate-constants") return cmd_estimate_constants(args);
    if (command == "dispersion") return cmd_dispersion(args);
    if (command == "check-params") return cmd_check_params(args);
    if (command == "verify") return cmd_verify(args);
    std::cerr << "unknown command '" << command << "'\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mmx
