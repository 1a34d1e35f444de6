#include "beamforge/sweep.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "beamforge/cc_baseline.hpp"
#include "beamforge/config.hpp"
#include "beamforge/generator.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace beamforge {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::da_cov:
      return "da-cov";
    case Method::da_cap:
      return "da-cap";
    case Method::da_lb:
      return "da-lb";
    case Method::cc:
      return "cc";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "da-cov") return Method::da_cov;
  if (name == "da-cap") return Method::da_cap;
  if (name == "da-lb") return Method::da_lb;
  if (name == "cc") return Method::cc;
  throw BeamforgeError("unknown method '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  if (u_values.empty() || r_max_values.empty() || c_max_values.empty())
    throw BeamforgeError("experiment lists must be nonempty");
  if (runs_per_cell == 0 || cc_repeats == 0) throw BeamforgeError("run counts must be positive");
  if (!(demand_range.min_mbps > 0.0) || demand_range.min_mbps > demand_range.max_mbps)
    throw BeamforgeError("demand range must satisfy 0 < min <= max");
  if (!(extent_km > 0.0)) throw BeamforgeError("extent must be positive");
  for (auto u : u_values)
    if (u == 0) throw BeamforgeError("U values must be positive");
  for (double r : r_max_values)
    if (!(r > 0.0)) throw BeamforgeError("r_max values must be positive");
  for (double c : c_max_values)
    if (!(c > 0.0)) throw BeamforgeError("c_max values must be positive");
  if (b_max == 0) throw BeamforgeError("b_max must be positive");
  solver.validate();
}

ExperimentSpec parse_experiment_spec(const json& doc) {
  if (!doc.is_object()) throw BeamforgeError("experiment spec must be a JSON object");
  ExperimentSpec spec;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "method") spec.method = parse_method(value.get<std::string>());
      else if (key == "u_values") spec.u_values = value.get<std::vector<std::size_t>>();
      else if (key == "r_max_values") spec.r_max_values = value.get<std::vector<double>>();
      else if (key == "c_max_values") {
        spec.c_max_values.clear();
        for (const auto& c : value) spec.c_max_values.push_back(parse_capacity(c));
      }
      else if (key == "runs_per_cell") spec.runs_per_cell = value.get<std::size_t>();
      else if (key == "cc_repeats") spec.cc_repeats = value.get<std::size_t>();
      else if (key == "demand_range") {
        const auto r = value.get<std::vector<double>>();
        if (r.size() != 2) throw BeamforgeError("demand_range needs [min, max]");
        spec.demand_range = {r[0], r[1]};
      }
      else if (key == "base_seed") spec.base_seed = value.get<std::uint64_t>();
      else if (key == "extent_km") spec.extent_km = value.get<double>();
      else if (key == "b_max") spec.b_max = value.get<std::size_t>();
      else if (key == "solver") apply_solver_keys(spec.solver, value);
      else throw BeamforgeError("unknown experiment key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw BeamforgeError(std::string("experiment spec: ") + e.what());
  }
  if (spec.c_max_values.empty()) spec.c_max_values = {kUnbounded};
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BeamforgeError("cannot open experiment spec " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw BeamforgeError("experiment spec " + path.string() + ": " + e.what());
  }
  return parse_experiment_spec(doc);
}

json to_json(const ExperimentSpec& spec) {
  json c = json::array();
  for (double v : spec.c_max_values) c.push_back(capacity_json(v));
  return {{"method", std::string(to_string(spec.method))},
          {"u_values", spec.u_values},
          {"r_max_values", spec.r_max_values},
          {"c_max_values", c},
          {"runs_per_cell", spec.runs_per_cell},
          {"cc_repeats", spec.cc_repeats},
          {"demand_range", {spec.demand_range.min_mbps, spec.demand_range.max_mbps}},
          {"base_seed", spec.base_seed},
          {"extent_km", spec.extent_km},
          {"b_max", spec.b_max},
          {"solver", to_json(spec.solver)}};
}

std::uint64_t instance_seed(std::uint64_t base_seed, std::size_t users, std::size_t run) {
  return mix_seed(mix_seed(base_seed, users), run);
}

std::uint64_t solver_seed(std::uint64_t base_seed, std::size_t cell, std::size_t run) {
  return mix_seed(mix_seed(~base_seed, cell), run);
}

MethodOutcome run_method(Method method, const Scenario& scenario, SolverConfig solver,
                         std::size_t cc_repeats) {
  if (method == Method::cc) {
    BeamPlan plan = cc_best_of(scenario, cc_repeats, solver.seed);
    const bool ok = check_feasibility(scenario, plan).coverage_ok;
    return {std::move(plan), ok, false};
  }
  solver.variant = method == Method::da_cov   ? Variant::coverage
                   : method == Method::da_cap ? Variant::capacity
                                              : Variant::load_balance;
  SolveResult r = solve(scenario, solver);
  return {std::move(r.plan), r.feasible, r.hit_beam_cap};
}

int sweep_thread_cap() {
  if (const char* env = std::getenv("BEAMFORGE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

SweepResult run_sweep(const ExperimentSpec& spec, int threads) {
  spec.validate();
  SweepResult result;
  result.spec = spec;

  struct Cell {
    std::size_t users;
    double r_max;
    double c_max;
  };
  std::vector<Cell> cells;
  for (auto u : spec.u_values)
    for (double r : spec.r_max_values)
      for (double c : spec.c_max_values) cells.push_back({u, r, c});

  const std::size_t runs = spec.runs_per_cell;
  result.runs.resize(cells.size() * runs);
  const std::ptrdiff_t jobs = static_cast<std::ptrdiff_t>(result.runs.size());
  [[maybe_unused]] const int team = threads > 0 ? threads : sweep_thread_cap();
  std::vector<std::string> errors(result.runs.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (std::ptrdiff_t job = 0; job < jobs; ++job) {
    const std::size_t ci = static_cast<std::size_t>(job) / runs;
    const std::size_t run = static_cast<std::size_t>(job) % runs;
    const Cell& cell = cells[ci];
    RunRecord& rec = result.runs[static_cast<std::size_t>(job)];
    rec = {ci, run, cell.users, cell.r_max, cell.c_max, instance_seed(spec.base_seed, cell.users, run),
           0, false, false, 0.0, 0.0};
    try {
      const Scenario scenario = generate(cell.users, spec.extent_km, spec.demand_range,
                                         rec.instance_seed,
                                         {cell.r_max, cell.c_max, spec.b_max, Weighting::uniform});
      SolverConfig solver = spec.solver;
      solver.seed = solver_seed(spec.base_seed, ci, run);
      const auto started = std::chrono::steady_clock::now();
      const MethodOutcome out = run_method(spec.method, scenario, solver, spec.cc_repeats);
      rec.runtime_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      rec.beams = out.plan.beam_count();
      rec.feasible = out.feasible;
      rec.hit_beam_cap = out.hit_beam_cap;
      const auto profile = load_profile(out.plan, scenario);
      rec.load_std = stddev(profile);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(job)] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw BeamforgeError("sweep run failed: " + e);

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    CellRecord cell{spec.method, cells[ci].users, cells[ci].r_max, cells[ci].c_max, 0, 0, 0, 0, 0, {}, {}};
    std::vector<double> beams;
    double runtime = 0.0;
    for (std::size_t run = 0; run < runs; ++run) {
      const RunRecord& rec = result.runs[ci * runs + run];
      cell.beams_per_run.push_back(rec.beams);
      cell.load_std_per_run.push_back(rec.load_std);
      beams.push_back(static_cast<double>(rec.beams));
      runtime += rec.runtime_s;
      if (rec.feasible) ++cell.feasible_runs;
    }
    const double n = static_cast<double>(runs);
    cell.mean_beams = std::accumulate(beams.begin(), beams.end(), 0.0) / n;
    cell.std_beams = stddev(beams);
    cell.mean_runtime_s = runtime / n;
    cell.mean_load_std =
        std::accumulate(cell.load_std_per_run.begin(), cell.load_std_per_run.end(), 0.0) / n;
    result.cells.push_back(std::move(cell));
  }
  return result;
}

}  // namespace beamforge
