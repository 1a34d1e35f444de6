#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "beamforge/da_solver.hpp"
#include "beamforge/terminal_csv.hpp"
#include "json.hpp"

namespace beamforge {

enum class Method { da_cov, da_cap, da_lb, cc };

[[nodiscard]] std::string_view to_string(Method m);
[[nodiscard]] Method parse_method(std::string_view name);

struct ExperimentSpec {
  Method method{Method::da_cov};
  std::vector<std::size_t> u_values;
  std::vector<double> r_max_values;
  std::vector<double> c_max_values;  // kUnbounded allowed
  std::size_t runs_per_cell{10};
  std::size_t cc_repeats{100};
  DemandRange demand_range{};
  std::uint64_t base_seed{1};
  double extent_km{100.0};
  std::size_t b_max{32};
  SolverConfig solver{};  // variant is overridden by `method`

  void validate() const;
};

[[nodiscard]] ExperimentSpec parse_experiment_spec(const nlohmann::json& doc);
[[nodiscard]] ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const ExperimentSpec& spec);

struct RunRecord {
  std::size_t cell;
  std::size_t run;
  std::size_t users;
  double r_max;
  double c_max;
  std::uint64_t instance_seed;
  std::size_t beams;
  bool feasible;
  bool hit_beam_cap;
  double load_std;  // std of fractional loads across beams
  double runtime_s;
};

struct CellRecord {
  Method method;
  std::size_t users;
  double r_max;
  double c_max;
  double mean_beams;
  double std_beams;  // population
  double mean_runtime_s;
  double mean_load_std;
  std::size_t feasible_runs;
  std::vector<std::size_t> beams_per_run;
  std::vector<double> load_std_per_run;
};

struct SweepResult {
  ExperimentSpec spec;
  std::vector<CellRecord> cells;
  std::vector<RunRecord> runs;  // ordered by (cell, run)
};

// Instance depends only on (base_seed, U, run), so every method and every
// (r_max, c_max) cell sees the same terminals for a given U and run.
[[nodiscard]] std::uint64_t instance_seed(std::uint64_t base_seed, std::size_t users,
                                          std::size_t run);
[[nodiscard]] std::uint64_t solver_seed(std::uint64_t base_seed, std::size_t cell, std::size_t run);

struct MethodOutcome {
  BeamPlan plan;
  bool feasible;
  bool hit_beam_cap;
};

// Solves one instance with the given method.
[[nodiscard]] MethodOutcome run_method(Method method, const Scenario& scenario, SolverConfig solver,
                                       std::size_t cc_repeats);

// `threads` <= 0 uses BEAMFORGE_THREADS, else the OpenMP default.
[[nodiscard]] SweepResult run_sweep(const ExperimentSpec& spec, int threads = 0);

[[nodiscard]] int sweep_thread_cap();

}  // namespace beamforge
