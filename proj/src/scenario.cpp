#include "beamforge/scenario.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <unordered_set>

namespace beamforge {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void validate_terminals(std::span<const Terminal> terminals) {
  if (terminals.empty()) throw BeamforgeError("scenario has no terminals");
  std::unordered_set<std::string> seen;
  for (const auto& t : terminals) {
    if (!seen.insert(t.id).second) throw BeamforgeError("duplicate terminal id '" + t.id + "'");
    if (!(t.demand_mbps > 0.0) || !std::isfinite(t.demand_mbps))
      throw BeamforgeError("terminal '" + t.id + "' has non-positive demand");
    if (!std::isfinite(t.position.x) || !std::isfinite(t.position.y))
      throw BeamforgeError("terminal '" + t.id + "' has non-finite position");
  }
}

}  // namespace

Scenario::Scenario(std::vector<Terminal> terminals, ScenarioParams params,
                   std::optional<GeoOrigin> origin)
    : terminals_(std::move(terminals)), params_(params), origin_(origin) {
  validate_terminals(terminals_);
  if (!(params_.r_max_km > 0.0) || !std::isfinite(params_.r_max_km))
    throw BeamforgeError("r_max must be positive and finite");
  if (!(params_.c_max_mbps > 0.0)) throw BeamforgeError("c_max must be positive or unbounded");
  if (params_.b_max == 0) throw BeamforgeError("b_max must be at least 1");

  weights_.resize(terminals_.size());
  if (params_.weighting == Weighting::demand) {
    const double total = total_demand();
    std::transform(terminals_.begin(), terminals_.end(), weights_.begin(),
                   [total](const Terminal& t) { return t.demand_mbps / total; });
  } else {
    std::fill(weights_.begin(), weights_.end(), 1.0 / static_cast<double>(terminals_.size()));
  }
}

double Scenario::total_demand() const {
  return std::accumulate(terminals_.begin(), terminals_.end(), 0.0,
                         [](double acc, const Terminal& t) { return acc + t.demand_mbps; });
}

Scenario Scenario::with_params(ScenarioParams params) const {
  return Scenario(terminals_, params, origin_);
}

BeamPlan make_plan(const Scenario& scenario, std::vector<Vec2> centers,
                   std::vector<std::size_t> assignment) {
  if (assignment.size() != scenario.size())
    throw BeamforgeError("assignment size does not match terminal count");
  BeamPlan plan;
  plan.centers = std::move(centers);
  plan.assignment = std::move(assignment);
  plan.per_beam_load.assign(plan.centers.size(), 0.0);
  plan.per_beam_count.assign(plan.centers.size(), 0);
  const auto terminals = scenario.terminals();
  for (std::size_t u = 0; u < plan.assignment.size(); ++u) {
    const std::size_t b = plan.assignment[u];
    if (b >= plan.centers.size()) throw BeamforgeError("assignment references beam out of range");
    plan.per_beam_load[b] += terminals[u].demand_mbps;
    ++plan.per_beam_count[b];
  }
  return plan;
}

BeamPlan compact_plan(const Scenario& scenario, const BeamPlan& plan) {
  std::vector<std::size_t> remap(plan.centers.size(), 0);
  std::vector<Vec2> centers;
  for (std::size_t b = 0; b < plan.centers.size(); ++b) {
    if (plan.per_beam_count[b] > 0) {
      remap[b] = centers.size();
      centers.push_back(plan.centers[b]);
    }
  }
  std::vector<std::size_t> assignment(plan.assignment.size());
  std::transform(plan.assignment.begin(), plan.assignment.end(), assignment.begin(),
                 [&](std::size_t b) { return remap[b]; });
  return make_plan(scenario, std::move(centers), std::move(assignment));
}

std::vector<Terminal> project_geodetic(std::span<const GeoRecord> records, GeoOrigin* origin_out) {
  if (records.empty()) throw BeamforgeError("no geodetic records");
  double lat_sum = 0.0;
  double lon_sum = 0.0;
  for (const auto& r : records) {
    if (!(r.lat_deg >= -90.0 && r.lat_deg <= 90.0))
      throw BeamforgeError("latitude out of range for '" + r.id + "'");
    if (!(r.lon_deg >= -180.0 && r.lon_deg <= 180.0))
      throw BeamforgeError("longitude out of range for '" + r.id + "'");
    lat_sum += r.lat_deg;
    lon_sum += r.lon_deg;
  }
  const GeoOrigin origin{lat_sum / static_cast<double>(records.size()),
                         lon_sum / static_cast<double>(records.size())};
  if (origin_out != nullptr) *origin_out = origin;

  const double x_scale = kEarthRadiusKm * std::cos(origin.lat0_deg * kDegToRad) * kDegToRad;
  const double y_scale = kEarthRadiusKm * kDegToRad;
  std::vector<Terminal> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({r.id,
                   {x_scale * (r.lon_deg - origin.lon0_deg), y_scale * (r.lat_deg - origin.lat0_deg)},
                   r.demand_mbps});
  }
  return out;
}

std::pair<double, double> unproject(Vec2 p, GeoOrigin origin) {
  const double lat = origin.lat0_deg + p.y / (kEarthRadiusKm * kDegToRad);
  const double lon =
      origin.lon0_deg + p.x / (kEarthRadiusKm * std::cos(origin.lat0_deg * kDegToRad) * kDegToRad);
  return {lat, lon};
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  const double dlat = (lat2 - lat1) * kDegToRad;
  const double dlon = (lon2 - lon1) * kDegToRad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kDegToRad) * std::cos(lat2 * kDegToRad) * std::sin(dlon / 2) *
                       std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

double distortion(Vec2 u, Vec2 center, double alpha, double r_max) {
  return std::pow(distance(u, center) / r_max, alpha);
}

FeasibilityReport check_feasibility(const Scenario& scenario, const BeamPlan& plan) {
  if (plan.assignment.size() != scenario.size())
    throw BeamforgeError("plan assignment does not cover the scenario's terminals");
  const std::size_t m = plan.centers.size();
  const auto terminals = scenario.terminals();
  const double radius_limit = scenario.r_max() * (1.0 + kCoverageSlack);

  FeasibilityReport report;
  std::vector<double> loads(m, 0.0);
  for (std::size_t u = 0; u < terminals.size(); ++u) {
    const std::size_t b = plan.assignment[u];
    if (b >= m) throw BeamforgeError("assignment of '" + terminals[u].id + "' is out of range");
    const double d = distance(terminals[u].position, plan.centers[b]);
    report.max_radius_used = std::max(report.max_radius_used, d);
    if (d > radius_limit) ++report.uncovered;
    loads[b] += terminals[u].demand_mbps;
  }
  const double total = scenario.total_demand();
  report.fractional_loads.resize(m);
  for (std::size_t b = 0; b < m; ++b) {
    report.max_load = std::max(report.max_load, loads[b]);
    if (loads[b] > scenario.c_max()) ++report.overloaded_beams;
    report.fractional_loads[b] = loads[b] / total;
  }
  report.coverage_ok = report.uncovered == 0;
  report.capacity_ok = report.overloaded_beams == 0;
  return report;
}

std::vector<double> load_profile(const BeamPlan& plan, const Scenario& scenario) {
  const double total = scenario.total_demand();
  std::vector<double> out(plan.per_beam_load.size());
  std::transform(plan.per_beam_load.begin(), plan.per_beam_load.end(), out.begin(),
                 [total](double load) { return load / total; });
  return out;
}

double stddev(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / n);
}

}  // namespace beamforge
