#pragma once

#include <cstdint>

#include "beamforge/scenario.hpp"
#include "beamforge/terminal_csv.hpp"

namespace beamforge {

// `users` terminals uniform in [0, extent]^2 with uniform demands.
[[nodiscard]] Scenario generate(std::size_t users, double extent_km, DemandRange demand,
                                std::uint64_t seed, const ScenarioParams& params = {});

// SplitMix64 finalizer; used to derive independent seeds from indices.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace beamforge
