#pragma once

#include <span>

#include "beamforge/scenario.hpp"

namespace beamforge {

struct Disk {
  Vec2 center;
  double radius{0.0};

  [[nodiscard]] bool contains(Vec2 p, double slack = 1e-12) const {
    return distance(center, p) <= radius * (1.0 + slack) + slack;
  }
};

// Smallest disk enclosing all points (randomized incremental construction
// with a fixed internal shuffle, so the result is a pure function of input).
[[nodiscard]] Disk min_enclosing_disk(std::span<const Vec2> points);

[[nodiscard]] Disk disk_through(Vec2 a, Vec2 b);
[[nodiscard]] Disk disk_through(Vec2 a, Vec2 b, Vec2 c);

}  // namespace beamforge
