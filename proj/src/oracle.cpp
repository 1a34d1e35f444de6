#include "beamforge/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace beamforge {

namespace {

using Mask = std::uint32_t;

struct Candidate {
  Vec2 center;
  Mask covers;
};

// Keeps one candidate per coverage mask and drops masks contained in another.
std::vector<Candidate> maximal_candidates(const Scenario& scenario) {
  const auto terminals = scenario.terminals();
  const double limit = scenario.r_max() * (1.0 + kCoverageSlack);
  std::vector<Candidate> all;
  for (Vec2 c : candidate_centers(scenario).centers) {
    Mask m = 0;
    for (std::size_t u = 0; u < terminals.size(); ++u)
      if (distance(terminals[u].position, c) <= limit) m |= Mask{1} << u;
    if (m != 0) all.push_back({c, m});
  }
  std::vector<Candidate> kept;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < all.size() && !dominated; ++j) {
      if (i == j) continue;
      const bool subset = (all[i].covers & all[j].covers) == all[i].covers;
      if (subset && (all[i].covers != all[j].covers || j < i)) dominated = true;
    }
    if (!dominated) kept.push_back(all[i]);
  }
  return kept;
}

class CoverSearch {
 public:
  CoverSearch(const Scenario& scenario, std::vector<Candidate> candidates, bool with_capacity)
      : terminals_(scenario.terminals()),
        candidates_(std::move(candidates)),
        capacity_(with_capacity ? scenario.c_max() : kUnbounded),
        assignment_(terminals_.size(), kNone) {}

  bool run(std::size_t beams) {
    limit_ = beams;
    open_.clear();
    std::fill(assignment_.begin(), assignment_.end(), kNone);
    remaining_demand_ = 0.0;
    for (const auto& t : terminals_) remaining_demand_ += t.demand_mbps;
    return descend();
  }

  [[nodiscard]] BeamPlan plan(const Scenario& scenario) const {
    std::vector<Vec2> centers;
    for (const auto& d : open_) centers.push_back(candidates_[d.candidate].center);
    return make_plan(scenario, std::move(centers), assignment_);
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct OpenDisk {
    std::size_t candidate;
    double load;
  };

  bool covers(std::size_t candidate, std::size_t u) const {
    return (candidates_[candidate].covers >> u) & Mask{1};
  }

  bool bound_allows() const {
    if (!std::isfinite(capacity_)) return true;
    double spare = 0.0;
    for (const auto& d : open_) spare += capacity_ - d.load;
    const double excess = remaining_demand_ - spare;
    const double needed = excess > 0.0 ? std::ceil(excess / capacity_ - 1e-12) : 0.0;
    return static_cast<double>(open_.size()) + needed <= static_cast<double>(limit_);
  }

  bool descend() {
    const auto first = std::find(assignment_.begin(), assignment_.end(), kNone);
    if (first == assignment_.end()) return true;
    if (!bound_allows()) return false;
    const std::size_t u = static_cast<std::size_t>(first - assignment_.begin());
    const double f = terminals_[u].demand_mbps;

    for (std::size_t d = 0; d < open_.size(); ++d) {
      if (!covers(open_[d].candidate, u) || open_[d].load + f > capacity_) continue;
      if (place(u, d)) return true;
      if (!std::isfinite(capacity_)) return false;  // any covering disk is as good as another
    }
    if (open_.size() == limit_) return false;
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
      if (!covers(c, u) || f > capacity_) continue;
      open_.push_back({c, 0.0});
      if (place(u, open_.size() - 1)) return true;
      open_.pop_back();
    }
    return false;
  }

  bool place(std::size_t u, std::size_t disk) {
    const double f = terminals_[u].demand_mbps;
    assignment_[u] = disk;
    open_[disk].load += f;
    remaining_demand_ -= f;
    if (descend()) return true;
    assignment_[u] = kNone;
    open_[disk].load -= f;
    remaining_demand_ += f;
    return false;
  }

  std::span<const Terminal> terminals_;
  std::vector<Candidate> candidates_;
  double capacity_;
  std::vector<std::size_t> assignment_;
  std::vector<OpenDisk> open_;
  std::size_t limit_{0};
  double remaining_demand_{0.0};
};

}  // namespace

CandidateCenterSet candidate_centers(const Scenario& scenario) {
  const auto terminals = scenario.terminals();
  const double r = scenario.r_max();
  CandidateCenterSet set;
  for (const auto& t : terminals) set.centers.push_back(t.position);
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    for (std::size_t j = i + 1; j < terminals.size(); ++j) {
      const Vec2 a = terminals[i].position;
      const Vec2 b = terminals[j].position;
      const double d = distance(a, b);
      if (d == 0.0 || d > 2.0 * r * (1.0 + kCoverageSlack)) continue;
      const Vec2 mid = 0.5 * (a + b);
      const double h = std::sqrt(std::max(0.0, r * r - 0.25 * d * d));
      const Vec2 normal{-(b.y - a.y) / d, (b.x - a.x) / d};
      set.centers.push_back(mid + h * normal);
      if (h > 0.0) set.centers.push_back(mid - h * normal);
    }
  }
  return set;
}

BeamPlan exact_min_cover(const Scenario& scenario, bool with_capacity) {
  if (scenario.size() > kOracleMaxUsers)
    throw BeamforgeError("exact_min_cover supports at most " + std::to_string(kOracleMaxUsers) +
                         " terminals");
  CoverSearch search(scenario, maximal_candidates(scenario), with_capacity);
  for (std::size_t k = 1; k <= scenario.size(); ++k) {
    if (search.run(k)) return search.plan(scenario);
  }
  throw BeamforgeError("no feasible cover: a terminal's demand exceeds c_max");
}

}  // namespace beamforge
