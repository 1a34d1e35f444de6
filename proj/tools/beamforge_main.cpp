#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "beamforge/cc_baseline.hpp"
#include "beamforge/config.hpp"
#include "beamforge/da_solver.hpp"
#include "beamforge/emit.hpp"
#include "beamforge/generator.hpp"
#include "beamforge/oracle.hpp"
#include "beamforge/sweep.hpp"
#include "beamforge/terminal_csv.hpp"

namespace fs = std::filesystem;
using namespace beamforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct SolveArgs {
  std::string input;
  std::string method{"da-cov"};
  double r_max{0.0};
  std::optional<double> c_max;
  std::optional<std::size_t> b_max;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out{"."};
  bool geojson{false};
  std::size_t cc_repeats{100};
};

int run_solve(const SolveArgs& args) {
  RunConfig cfg = args.config.empty() ? RunConfig{} : load_run_config(args.config);
  cfg.scenario.r_max_km = args.r_max;
  if (args.c_max) cfg.scenario.c_max_mbps = *args.c_max;
  if (args.b_max) cfg.scenario.b_max = *args.b_max;
  if (args.seed) cfg.solver.seed = *args.seed;
  const Method method = parse_method(args.method);
  if (method == Method::da_cov) cfg.solver.variant = Variant::coverage;
  if (method == Method::da_cap) cfg.solver.variant = Variant::capacity;
  if (method == Method::da_lb) cfg.solver.variant = Variant::load_balance;

  const Scenario scenario = ingest(args.input, cfg.scenario, {{}, cfg.solver.seed});
  const fs::path out(args.out);

  nlohmann::json summary{{"method", args.method}, {"config", to_json(cfg)}, {"terminals", scenario.size()}};
  BeamPlan plan;
  bool feasible = false;
  bool hit_cap = false;
  if (method == Method::cc) {
    plan = cc_best_of(scenario, args.cc_repeats, cfg.solver.seed);
    feasible = check_feasibility(scenario, plan).coverage_ok;
    summary["cc_repeats"] = args.cc_repeats;
  } else {
    const SolveResult r = solve(scenario, cfg.solver);
    plan = r.plan;
    feasible = r.feasible;
    hit_cap = r.hit_beam_cap;
    fs::create_directories(out);
    emit_trace_csv(out / "trace.csv", r.trace);
    summary["trace_length"] = r.trace.size();
    summary["runtime_s"] = r.runtime_s;
  }
  const FeasibilityReport report = check_feasibility(scenario, plan);
  const PlanFiles files = emit_plan(out, scenario, plan, args.geojson);
  summary["beams"] = plan.beam_count();
  summary["feasible"] = feasible;
  summary["hit_beam_cap"] = hit_cap;
  summary["coverage_ok"] = report.coverage_ok;
  summary["capacity_ok"] = report.capacity_ok;
  summary["max_radius_used_km"] = report.max_radius_used;
  summary["max_load_mbps"] = report.max_load;
  summary["load_std"] = stddev(report.fractional_loads);
  emit_json(out / "summary.json", summary);

  std::cout << args.method << ": " << plan.beam_count() << " beams, "
            << (feasible ? "feasible" : "infeasible") << (hit_cap ? " (beam cap reached)" : "")
            << ", max radius " << report.max_radius_used << " km, max load " << report.max_load
            << " Mbps\n";
  if (files.geojson) std::cout << "wrote " << files.geojson->string() << '\n';
  return feasible ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacitated beam placement by deterministic annealing"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Place beams over a terminal CSV");
  solve_cmd->add_option("--input", solve_args.input, "Terminal CSV")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--method", solve_args.method, "da-cov | da-cap | da-lb | cc")
      ->check(CLI::IsMember({"da-cov", "da-cap", "da-lb", "cc"}));
  solve_cmd->add_option("--r-max", solve_args.r_max, "Beam radius, km")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--c-max", solve_args.c_max, "Beam capacity, Mbps")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--b-max", solve_args.b_max, "Beam count cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--config", solve_args.config, "JSON config")->check(CLI::ExistingFile);
  solve_cmd->add_option("--seed", solve_args.seed, "RNG seed");
  solve_cmd->add_option("--out", solve_args.out, "Output directory");
  solve_cmd->add_option("--cc-repeats", solve_args.cc_repeats, "Repetitions for cc")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--geojson", solve_args.geojson, "Also write plan.geojson (lat/lon input)");

  std::string spec_path;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment grid");
  sweep_cmd->add_option("--spec", spec_path, "Experiment JSON")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();

  std::size_t gen_users = 0;
  double gen_extent = 0.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  DemandRange gen_demand;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic terminal CSV");
  gen_cmd->add_option("--u", gen_users, "Terminal count")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--extent", gen_extent, "Square side, km")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_seed, "RNG seed")->required();
  gen_cmd->add_option("--out", gen_out, "Output CSV")->required();
  gen_cmd->add_option("--demand-min", gen_demand.min_mbps, "Minimum demand, Mbps");
  gen_cmd->add_option("--demand-max", gen_demand.max_mbps, "Maximum demand, Mbps");

  std::string oracle_input;
  double oracle_r = 0.0;
  std::optional<double> oracle_c;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact minimum cover for tiny instances");
  oracle_cmd->add_option("--input", oracle_input, "Terminal CSV")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--r-max", oracle_r, "Beam radius, km")->required()->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--c-max", oracle_c, "Beam capacity, Mbps")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve_args);
    if (*sweep_cmd) {
      const SweepResult result = run_sweep(load_experiment_spec(spec_path));
      emit_sweep(sweep_out, result);
      for (const auto& c : result.cells) {
        std::cout << to_string(c.method) << " U=" << c.users << " r_max=" << c.r_max
                  << " c_max=" << capacity_text(c.c_max) << " mean_beams=" << c.mean_beams
                  << " std=" << c.std_beams << '\n';
      }
      return kExitOk;
    }
    if (*gen_cmd) {
      write_terminal_csv(gen_out, generate(gen_users, gen_extent, gen_demand, gen_seed));
      return kExitOk;
    }
    if (*oracle_cmd) {
      ScenarioParams params{oracle_r, oracle_c.value_or(kUnbounded), kOracleMaxUsers, Weighting::uniform};
      const Scenario scenario = ingest(oracle_input, params);
      const BeamPlan plan = exact_min_cover(scenario, oracle_c.has_value());
      std::cout << "optimal_beams " << plan.beam_count() << '\n';
      for (std::size_t b = 0; b < plan.beam_count(); ++b) {
        std::cout << "beam " << b << ' ' << format_double(plan.centers[b].x) << ' '
                  << format_double(plan.centers[b].y) << " load " << format_double(plan.per_beam_load[b])
                  << '\n';
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
