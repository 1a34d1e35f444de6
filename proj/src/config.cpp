#include "beamforge/config.hpp"

#include <fstream>

namespace beamforge {

using nlohmann::json;

double parse_capacity(const json& v) {
  if (v.is_null()) return kUnbounded;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "unbounded" || s == "infinity") return kUnbounded;
    throw BeamforgeError("bad capacity value '" + s + "'");
  }
  if (v.is_number()) return v.get<double>();
  throw BeamforgeError("capacity must be a number, null or \"inf\"");
}

json capacity_json(double c_max) { return std::isfinite(c_max) ? json(c_max) : json("inf"); }

void apply_solver_keys(SolverConfig& cfg, const json& doc) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "variant") cfg.variant = parse_variant(value.get<std::string>());
    else if (key == "alpha") cfg.alpha = value.get<double>();
    else if (key == "beta") cfg.beta = value.get<double>();
    else if (key == "eta") cfg.eta = value.get<double>();
    else if (key == "t_high") cfg.t_high = value.get<double>();
    else if (key == "t_min") cfg.t_min = value.get<double>();
    else if (key == "cooling_rate") cfg.cooling_rate = value.get<double>();
    else if (key == "inner_iters") cfg.inner_iters = value.get<std::size_t>();
    else if (key == "inner_tol") cfg.inner_tol = value.get<double>();
    else if (key == "split_perturbation") cfg.split_perturbation = value.get<double>();
    else if (key == "merge_threshold") cfg.merge_threshold = value.get<double>();
    else if (key == "p_floor") cfg.p_floor = value.get<double>();
    else if (key == "lb_relative_load") cfg.lb_relative_load = value.get<bool>();
    else if (key == "recenter_plan") cfg.recenter_plan = value.get<bool>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "backend") {
      const auto b = value.get<std::string>();
      if (b == "serial") cfg.backend = KernelBackend::serial;
      else if (b == "openmp") cfg.backend = KernelBackend::openmp;
      else throw BeamforgeError("backend must be 'serial' or 'openmp'");
    }
    else throw BeamforgeError("unknown solver key '" + key + "'");
  }
}

json to_json(const SolverConfig& cfg) {
  return {{"variant", std::string(to_string(cfg.variant))},
          {"alpha", cfg.alpha},
          {"beta", cfg.beta},
          {"eta", cfg.eta},
          {"t_high", cfg.t_high},
          {"t_min", cfg.t_min},
          {"cooling_rate", cfg.cooling_rate},
          {"inner_iters", cfg.inner_iters},
          {"inner_tol", cfg.inner_tol},
          {"split_perturbation", cfg.split_perturbation},
          {"merge_threshold", cfg.merge_threshold},
          {"p_floor", cfg.p_floor},
          {"lb_relative_load", cfg.lb_relative_load},
          {"recenter_plan", cfg.recenter_plan},
          {"seed", cfg.seed},
          {"backend", cfg.backend == KernelBackend::serial ? "serial" : "openmp"}};
}

void apply_config(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw BeamforgeError("config must be a JSON object");
  json solver_keys = json::object();
  for (const auto& [key, value] : doc.items()) {
    if (key == "r_max_km") cfg.scenario.r_max_km = value.get<double>();
    else if (key == "c_max_mbps") cfg.scenario.c_max_mbps = parse_capacity(value);
    else if (key == "b_max") cfg.scenario.b_max = value.get<std::size_t>();
    else if (key == "weighting") {
      const auto w = value.get<std::string>();
      if (w == "uniform") cfg.scenario.weighting = Weighting::uniform;
      else if (w == "demand") cfg.scenario.weighting = Weighting::demand;
      else throw BeamforgeError("weighting must be 'uniform' or 'demand'");
    }
    else if (key == "altitude_km") cfg.metadata.altitude_km = value.get<double>();
    else if (key == "satellite_lat_deg") cfg.metadata.satellite_lat_deg = value.get<double>();
    else if (key == "satellite_lon_deg") cfg.metadata.satellite_lon_deg = value.get<double>();
    else solver_keys[key] = value;
  }
  apply_solver_keys(cfg.solver, solver_keys);
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BeamforgeError("cannot open config " + path.string());
  RunConfig cfg;
  try {
    apply_config(cfg, json::parse(in));
  } catch (const json::exception& e) {
    throw BeamforgeError("config " + path.string() + ": " + e.what());
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json doc = to_json(cfg.solver);
  doc["r_max_km"] = cfg.scenario.r_max_km;
  doc["c_max_mbps"] = capacity_json(cfg.scenario.c_max_mbps);
  doc["b_max"] = cfg.scenario.b_max;
  doc["weighting"] = cfg.scenario.weighting == Weighting::demand ? "demand" : "uniform";
  doc["altitude_km"] = cfg.metadata.altitude_km;
  doc["satellite_lat_deg"] = cfg.metadata.satellite_lat_deg;
  doc["satellite_lon_deg"] = cfg.metadata.satellite_lon_deg;
  return doc;
}

}  // namespace beamforge
