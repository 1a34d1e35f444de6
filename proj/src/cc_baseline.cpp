#include "beamforge/cc_baseline.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "beamforge/min_disk.hpp"

namespace beamforge {

void ProximityGraph::connect(std::size_t i, std::size_t j) {
  if (i == j || adjacent(i, j)) return;
  adj_[i * n_ + j] = 1;
  adj_[j * n_ + i] = 1;
  neighbors_[i].push_back(j);
  neighbors_[j].push_back(i);
}

std::size_t ProximityGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& n : neighbors_) total += n.size();
  return total / 2;
}

ProximityGraph build_graph(const Scenario& scenario) {
  const auto terminals = scenario.terminals();
  const double limit = 2.0 * scenario.r_max() * (1.0 + kCoverageSlack);
  ProximityGraph g(terminals.size());
  for (std::size_t i = 0; i < terminals.size(); ++i)
    for (std::size_t j = i + 1; j < terminals.size(); ++j)
      if (distance(terminals[i].position, terminals[j].position) <= limit) g.connect(i, j);
  return g;
}

namespace {

struct Clique {
  std::vector<std::size_t> members;
  Disk disk;
  std::size_t collisions{0};
};

Clique grow_clique(std::size_t seed, const ProximityGraph& graph, const Scenario& scenario,
                   const std::vector<bool>& covered, std::mt19937_64& rng) {
  const auto terminals = scenario.terminals();
  const double radius_limit = scenario.r_max() * (1.0 + kCoverageSlack);

  std::vector<std::size_t> order = graph.neighbors(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_partition(order.begin(), order.end(), [&](std::size_t v) { return !covered[v]; });

  Clique clique{{seed}, {terminals[seed].position, 0.0}, 0};
  std::vector<Vec2> points{terminals[seed].position};
  for (std::size_t v : order) {
    const bool joins_all = std::all_of(clique.members.begin(), clique.members.end(),
                                       [&](std::size_t m) { return graph.adjacent(m, v); });
    if (!joins_all) continue;
    points.push_back(terminals[v].position);
    const Disk disk = clique.disk.contains(terminals[v].position) ? clique.disk
                                                                  : min_enclosing_disk(points);
    if (disk.radius > radius_limit) {
      points.pop_back();
      continue;
    }
    clique.members.push_back(v);
    clique.disk = disk;
    if (covered[v]) ++clique.collisions;
  }
  return clique;
}

bool better(const Clique& a, const Clique& b) {
  if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
  return a.collisions < b.collisions;
}

}  // namespace

BeamPlan cc_cover(const ProximityGraph& graph, const Scenario& scenario, std::uint64_t seed,
                  const CcOptions& options) {
  const std::size_t n = scenario.size();
  std::mt19937_64 rng(seed);
  std::vector<bool> covered(n, false);
  std::vector<std::size_t> assignment(n, std::numeric_limits<std::size_t>::max());
  std::vector<Vec2> centers;
  std::vector<std::size_t> uncovered(n);
  for (std::size_t i = 0; i < n; ++i) uncovered[i] = i;

  while (!uncovered.empty()) {
    std::vector<std::size_t> seeds;
    std::sample(uncovered.begin(), uncovered.end(), std::back_inserter(seeds),
                static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, options.candidates_per_round)),
                rng);
    std::shuffle(seeds.begin(), seeds.end(), rng);

    Clique best = grow_clique(seeds.front(), graph, scenario, covered, rng);
    for (std::size_t i = 1; i < seeds.size(); ++i) {
      Clique c = grow_clique(seeds[i], graph, scenario, covered, rng);
      if (better(c, best)) best = std::move(c);
    }

    const std::size_t beam = centers.size();
    centers.push_back(best.disk.center);
    for (std::size_t v : best.members) {
      if (!covered[v]) {
        covered[v] = true;
        assignment[v] = beam;
      }
    }
    std::erase_if(uncovered, [&](std::size_t v) { return covered[v]; });
  }
  return make_plan(scenario, std::move(centers), std::move(assignment));
}

BeamPlan cc_best_of(const Scenario& scenario, std::size_t runs, std::uint64_t seed,
                    const CcOptions& options) {
  if (runs == 0) throw BeamforgeError("cc_best_of needs at least one run");
  const ProximityGraph graph = build_graph(scenario);
  BeamPlan best = cc_cover(graph, scenario, seed, options);
  for (std::size_t i = 1; i < runs; ++i) {
    BeamPlan plan = cc_cover(graph, scenario, seed + i, options);
    if (plan.beam_count() < best.beam_count()) best = std::move(plan);
  }
  return best;
}

}  // namespace beamforge
