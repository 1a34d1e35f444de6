#pragma once

#include <filesystem>
#include <optional>
#include <span>

#include "beamforge/da_solver.hpp"
#include "beamforge/scenario.hpp"
#include "beamforge/sweep.hpp"
#include "json.hpp"

namespace beamforge {

inline constexpr std::size_t kCircleVertices = 64;

struct PlanFiles {
  std::filesystem::path beams;
  std::filesystem::path assignment;
  std::optional<std::filesystem::path> geojson;
};

// beams.csv, assignment.csv and, for lat/lon scenarios when requested,
// plan.geojson.
PlanFiles emit_plan(const std::filesystem::path& dir, const Scenario& scenario,
                    const BeamPlan& plan, bool geojson);

// FeatureCollection of beam footprints (closed polygons) and terminal points.
// Requires a scenario with a projection origin.
[[nodiscard]] nlohmann::json plan_geojson(const Scenario& scenario, const BeamPlan& plan);

void emit_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace);
void emit_json(const std::filesystem::path& path, const nlohmann::json& doc);

// cells.csv and runs.csv (deterministic), plus summary.json with timings.
void emit_sweep(const std::filesystem::path& dir, const SweepResult& result);

// Beam index per terminal, in scenario order.
[[nodiscard]] std::vector<std::size_t> read_assignment_csv(const std::filesystem::path& path,
                                                           const Scenario& scenario);
[[nodiscard]] std::vector<Vec2> read_beam_centers_csv(const std::filesystem::path& path);

[[nodiscard]] std::string capacity_text(double c_max);

}  // namespace beamforge
