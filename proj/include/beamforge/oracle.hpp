#pragma once

#include <vector>

#include "beamforge/scenario.hpp"

namespace beamforge {

inline constexpr std::size_t kOracleMaxUsers = 12;

struct CandidateCenterSet {
  std::vector<Vec2> centers;
};

// Every terminal position, plus the (up to two) centers of radius-r_max
// circles through each pair of terminals within 2·r_max. The feasible centers
// for a set S form an intersection of radius-r_max disks around S; when that
// region is nonempty it has a vertex on two of those circles (or, for a lone
// distinct point, contains the point itself), so some optimal cover uses
// candidate centers only.
[[nodiscard]] CandidateCenterSet candidate_centers(const Scenario& scenario);

// Minimum-beam plan by iterative deepening over candidate subsets. With
// capacity, a candidate may host several beams.
[[nodiscard]] BeamPlan exact_min_cover(const Scenario& scenario, bool with_capacity);

}  // namespace beamforge
