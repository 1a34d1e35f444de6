#include "beamforge/generator.hpp"

#include <cstdio>
#include <random>

namespace beamforge {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Scenario generate(std::size_t users, double extent_km, DemandRange demand, std::uint64_t seed,
                  const ScenarioParams& params) {
  if (users == 0) throw BeamforgeError("generate needs at least one terminal");
  if (!(extent_km > 0.0)) throw BeamforgeError("extent must be positive");
  if (!(demand.min_mbps > 0.0) || demand.min_mbps > demand.max_mbps)
    throw BeamforgeError("demand range must satisfy 0 < min <= max");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, extent_km);
  std::uniform_real_distribution<double> traffic(demand.min_mbps, demand.max_mbps);
  std::vector<Terminal> terminals;
  terminals.reserve(users);
  for (std::size_t i = 0; i < users; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "t%04zu", i);
    const double x = coord(rng);
    const double y = coord(rng);
    const double f = demand.min_mbps == demand.max_mbps ? demand.min_mbps : traffic(rng);
    terminals.push_back({id, {x, y}, f});
  }
  return Scenario(std::move(terminals), params);
}

}  // namespace beamforge
