#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace beamforge {

class BeamforgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x{0.0};
  double y{0.0};

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

[[nodiscard]] inline double squared_norm(Vec2 v) { return v.x * v.x + v.y * v.y; }
[[nodiscard]] inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Relative slack on the coverage test; absorbs rounding for centers placed
// exactly on a disk boundary (oracle candidates, enclosing-disk centers).
inline constexpr double kCoverageSlack = 1e-9;

struct Terminal {
  std::string id;
  Vec2 position;  // km, local planar frame
  double demand_mbps{0.0};
};

struct GeoRecord {
  std::string id;
  double lat_deg{0.0};
  double lon_deg{0.0};
  double demand_mbps{0.0};
};

// Projection origin for equirectangular frames; present when a scenario was
// built from lat/lon records.
struct GeoOrigin {
  double lat0_deg{0.0};
  double lon0_deg{0.0};
};

enum class Weighting { uniform, demand };

struct ScenarioParams {
  double r_max_km{45.0};
  double c_max_mbps{700.0};  // kUnbounded for no capacity limit
  std::size_t b_max{32};
  Weighting weighting{Weighting::uniform};
};

class Scenario {
 public:
  Scenario(std::vector<Terminal> terminals, ScenarioParams params,
           std::optional<GeoOrigin> origin = std::nullopt);

  [[nodiscard]] std::span<const Terminal> terminals() const { return terminals_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] std::size_t size() const { return terminals_.size(); }
  [[nodiscard]] double r_max() const { return params_.r_max_km; }
  [[nodiscard]] double c_max() const { return params_.c_max_mbps; }
  [[nodiscard]] bool capacity_bounded() const { return std::isfinite(params_.c_max_mbps); }
  [[nodiscard]] std::size_t b_max() const { return params_.b_max; }
  [[nodiscard]] const ScenarioParams& params() const { return params_; }
  [[nodiscard]] const std::optional<GeoOrigin>& origin() const { return origin_; }
  [[nodiscard]] double total_demand() const;

  // Same terminals, different system parameters.
  [[nodiscard]] Scenario with_params(ScenarioParams params) const;

 private:
  std::vector<Terminal> terminals_;
  std::vector<double> weights_;
  ScenarioParams params_;
  std::optional<GeoOrigin> origin_;
};

struct BeamPlan {
  std::vector<Vec2> centers;
  std::vector<std::size_t> assignment;  // terminal index → beam index
  std::vector<double> per_beam_load;
  std::vector<std::size_t> per_beam_count;

  [[nodiscard]] std::size_t beam_count() const { return centers.size(); }
};

// Builds a plan from centers and assignment, recomputing per-beam totals.
[[nodiscard]] BeamPlan make_plan(const Scenario& scenario, std::vector<Vec2> centers,
                                 std::vector<std::size_t> assignment);

// Drops beams with no assigned terminal and renumbers the rest in order.
[[nodiscard]] BeamPlan compact_plan(const Scenario& scenario, const BeamPlan& plan);

struct FeasibilityReport {
  bool coverage_ok{false};
  bool capacity_ok{false};
  double max_radius_used{0.0};
  double max_load{0.0};
  std::size_t uncovered{0};
  std::size_t overloaded_beams{0};
  std::vector<double> fractional_loads;

  [[nodiscard]] bool feasible(bool with_capacity) const {
    return coverage_ok && (!with_capacity || capacity_ok);
  }
};

[[nodiscard]] std::vector<Terminal> project_geodetic(std::span<const GeoRecord> records,
                                                     GeoOrigin* origin_out = nullptr);
[[nodiscard]] std::pair<double, double> unproject(Vec2 p, GeoOrigin origin);
[[nodiscard]] double haversine_km(double lat1, double lon1, double lat2, double lon2);

// (|u - c| / r_max)^alpha; equals 1 on the coverage boundary.
[[nodiscard]] double distortion(Vec2 u, Vec2 center, double alpha, double r_max);

[[nodiscard]] FeasibilityReport check_feasibility(const Scenario& scenario, const BeamPlan& plan);

// Per-beam load divided by total demand.
[[nodiscard]] std::vector<double> load_profile(const BeamPlan& plan, const Scenario& scenario);

// Population standard deviation.
[[nodiscard]] double stddev(std::span<const double> values);

}  // namespace beamforge
