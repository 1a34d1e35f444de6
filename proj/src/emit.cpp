#include "beamforge/emit.hpp"

#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "beamforge/config.hpp"
#include "beamforge/terminal_csv.hpp"

namespace beamforge {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw BeamforgeError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw BeamforgeError("failed writing " + path.string());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) {
    if (!f.empty() && f.back() == '\r') f.pop_back();
    out.push_back(f);
  }
  return out;
}

double to_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw BeamforgeError("bad number '" + s + "'");
  return v;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw BeamforgeError("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

std::string capacity_text(double c_max) {
  return std::isfinite(c_max) ? format_double(c_max) : std::string("inf");
}

PlanFiles emit_plan(const std::filesystem::path& dir, const Scenario& scenario,
                    const BeamPlan& plan, bool geojson) {
  ensure_dir(dir);
  PlanFiles files{dir / "beams.csv", dir / "assignment.csv", std::nullopt};

  const auto terminals = scenario.terminals();
  auto beams = open_out(files.beams);
  beams << "beam_id,x_km,y_km,r_km,load_mbps,user_count\n";
  for (std::size_t b = 0; b < plan.beam_count(); ++b) {
    beams << b << ',' << format_double(plan.centers[b].x) << ',' << format_double(plan.centers[b].y)
          << ',' << format_double(scenario.r_max()) << ',' << format_double(plan.per_beam_load[b]) << ','
          << plan.per_beam_count[b] << '\n';
  }
  finish(beams, files.beams);

  auto assignment = open_out(files.assignment);
  assignment << "terminal_id,beam_id\n";
  for (std::size_t u = 0; u < terminals.size(); ++u)
    assignment << terminals[u].id << ',' << plan.assignment[u] << '\n';
  finish(assignment, files.assignment);

  if (geojson && scenario.origin()) {
    files.geojson = dir / "plan.geojson";
    emit_json(*files.geojson, plan_geojson(scenario, plan));
  }
  return files;
}

json plan_geojson(const Scenario& scenario, const BeamPlan& plan) {
  if (!scenario.origin()) throw BeamforgeError("GeoJSON needs a lat/lon scenario");
  const GeoOrigin origin = *scenario.origin();
  json features = json::array();
  for (std::size_t b = 0; b < plan.beam_count(); ++b) {
    json ring = json::array();
    for (std::size_t i = 0; i <= kCircleVertices; ++i) {
      const double theta =
          2.0 * std::numbers::pi * static_cast<double>(i % kCircleVertices) / kCircleVertices;
      const Vec2 p = plan.centers[b] + scenario.r_max() * Vec2{std::cos(theta), std::sin(theta)};
      const auto [lat, lon] = unproject(p, origin);
      ring.push_back({lon, lat});
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
                        {"properties",
                         {{"kind", "beam"},
                          {"beam_id", b},
                          {"r_km", scenario.r_max()},
                          {"load_mbps", plan.per_beam_load[b]},
                          {"user_count", plan.per_beam_count[b]}}}});
  }
  const auto terminals = scenario.terminals();
  for (std::size_t u = 0; u < terminals.size(); ++u) {
    const auto [lat, lon] = unproject(terminals[u].position, origin);
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {lon, lat}}}},
                        {"properties",
                         {{"kind", "terminal"},
                          {"id", terminals[u].id},
                          {"beam_id", plan.assignment[u]},
                          {"demand_mbps", terminals[u].demand_mbps}}}});
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

void emit_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace) {
  auto out = open_out(path);
  out << "step,temperature,beams,free_energy,feasible\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << i << ',' << format_double(trace[i].temperature) << ',' << trace[i].beams << ','
        << format_double(trace[i].free_energy) << ',' << (trace[i].feasible ? 1 : 0) << '\n';
  }
  finish(out, path);
}

void emit_json(const std::filesystem::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

void emit_sweep(const std::filesystem::path& dir, const SweepResult& result) {
  ensure_dir(dir);
  const std::string method(to_string(result.spec.method));

  const auto cells_path = dir / "cells.csv";
  auto cells = open_out(cells_path);
  cells << "method,U,r_max_km,c_max_mbps,runs,feasible_runs,mean_beams,std_beams,mean_load_std,"
           "beams_per_run\n";
  for (const auto& c : result.cells) {
    cells << method << ',' << c.users << ',' << format_double(c.r_max) << ','
          << capacity_text(c.c_max) << ',' << c.beams_per_run.size() << ',' << c.feasible_runs
          << ',' << format_double(c.mean_beams) << ',' << format_double(c.std_beams) << ','
          << format_double(c.mean_load_std) << ',';
    for (std::size_t i = 0; i < c.beams_per_run.size(); ++i)
      cells << (i ? ";" : "") << c.beams_per_run[i];
    cells << '\n';
  }
  finish(cells, cells_path);

  const auto runs_path = dir / "runs.csv";
  auto runs = open_out(runs_path);
  runs << "method,cell,run,U,r_max_km,c_max_mbps,instance_seed,beams,feasible,hit_beam_cap,"
          "load_std\n";
  for (const auto& r : result.runs) {
    runs << method << ',' << r.cell << ',' << r.run << ',' << r.users << ','
         << format_double(r.r_max) << ',' << capacity_text(r.c_max) << ',' << r.instance_seed
         << ',' << r.beams << ',' << (r.feasible ? 1 : 0) << ',' << (r.hit_beam_cap ? 1 : 0)
         << ',' << format_double(r.load_std) << '\n';
  }
  finish(runs, runs_path);

  json cell_timing = json::array();
  for (const auto& c : result.cells) {
    cell_timing.push_back({{"U", c.users},
                           {"r_max_km", c.r_max},
                           {"c_max_mbps", capacity_json(c.c_max)},
                           {"mean_beams", c.mean_beams},
                           {"mean_runtime_s", c.mean_runtime_s}});
  }
  emit_json(dir / "summary.json",
            {{"spec", to_json(result.spec)}, {"cells", cell_timing}, {"run_count", result.runs.size()}});
}

std::vector<std::size_t> read_assignment_csv(const std::filesystem::path& path,
                                             const Scenario& scenario) {
  std::ifstream in(path);
  if (!in) throw BeamforgeError("cannot open " + path.string());
  std::unordered_map<std::string, std::size_t> index;
  const auto terminals = scenario.terminals();
  for (std::size_t u = 0; u < terminals.size(); ++u) index[terminals[u].id] = u;

  std::vector<std::size_t> out(terminals.size(), std::numeric_limits<std::size_t>::max());
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 2) throw BeamforgeError("line " + std::to_string(line_no) + ": expected 2 fields");
    const auto it = index.find(f[0]);
    if (it == index.end()) throw BeamforgeError("unknown terminal '" + f[0] + "'");
    out[it->second] = static_cast<std::size_t>(to_number(f[1]));
  }
  for (std::size_t u = 0; u < out.size(); ++u)
    if (out[u] == std::numeric_limits<std::size_t>::max())
      throw BeamforgeError("terminal '" + terminals[u].id + "' missing from assignment");
  return out;
}

std::vector<Vec2> read_beam_centers_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BeamforgeError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<Vec2> centers;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 6) throw BeamforgeError("beams.csv row needs 6 fields");
    centers.push_back({to_number(f[1]), to_number(f[2])});
  }
  return centers;
}

}  // namespace beamforge
