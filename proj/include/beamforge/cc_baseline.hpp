#pragma once

#include <cstdint>
#include <vector>

#include "beamforge/scenario.hpp"

namespace beamforge {

// Terminals joined when they are within 2·r_max of each other.
class ProximityGraph {
 public:
  explicit ProximityGraph(std::size_t nodes) : n_(nodes), adj_(nodes * nodes, 0), neighbors_(nodes) {}

  void connect(std::size_t i, std::size_t j);
  [[nodiscard]] bool adjacent(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }
  [[nodiscard]] const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_[i]; }
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] std::size_t edge_count() const;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

[[nodiscard]] ProximityGraph build_graph(const Scenario& scenario);

struct CcOptions {
  // Cliques grown from distinct random uncovered seeds per selection round.
  std::size_t candidates_per_round{8};
};

// Randomized greedy clique cover. Each emitted clique fits one r_max disk and
// gets a beam at its minimum enclosing disk center.
[[nodiscard]] BeamPlan cc_cover(const ProximityGraph& graph, const Scenario& scenario,
                                std::uint64_t seed, const CcOptions& options = {});

// Fewest-beam plan over `runs` seeded repetitions; first found wins ties.
// Run i uses seed + i.
[[nodiscard]] BeamPlan cc_best_of(const Scenario& scenario, std::size_t runs, std::uint64_t seed,
                                  const CcOptions& options = {});

}  // namespace beamforge
