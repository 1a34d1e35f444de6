#pragma once

#include <filesystem>

#include "beamforge/da_solver.hpp"
#include "beamforge/scenario.hpp"
#include "json.hpp"

namespace beamforge {

// Satellite parameters carried for reference; the planar model ignores them.
struct SystemMetadata {
  double altitude_km{1110.0};
  double satellite_lat_deg{26.812309};
  double satellite_lon_deg{-85.386382};
};

struct RunConfig {
  ScenarioParams scenario{};
  SolverConfig solver{};
  SystemMetadata metadata{};
};

// Flat key/value document. Unknown keys are rejected.
void apply_config(RunConfig& cfg, const nlohmann::json& doc);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const RunConfig& cfg);

void apply_solver_keys(SolverConfig& cfg, const nlohmann::json& doc);
[[nodiscard]] nlohmann::json to_json(const SolverConfig& cfg);

// Number, or null / "inf" / "unbounded" for no limit.
[[nodiscard]] double parse_capacity(const nlohmann::json& v);
[[nodiscard]] nlohmann::json capacity_json(double c_max);

}  // namespace beamforge
