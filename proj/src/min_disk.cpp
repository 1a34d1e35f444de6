#include "beamforge/min_disk.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace beamforge {

Disk disk_through(Vec2 a, Vec2 b) { return {0.5 * (a + b), 0.5 * distance(a, b)}; }

Disk disk_through(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double det = 2.0 * (ab.x * ac.y - ab.y * ac.x);
  const double scale = std::max({squared_norm(ab), squared_norm(ac), 1e-300});
  if (std::abs(det) <= 1e-14 * scale) {
    // Collinear: the disk on the farthest pair.
    Disk best = disk_through(a, b);
    for (const Disk& d : {disk_through(a, c), disk_through(b, c)})
      if (d.radius > best.radius) best = d;
    return best;
  }
  const double ab2 = squared_norm(ab);
  const double ac2 = squared_norm(ac);
  const Vec2 offset{(ac.y * ab2 - ab.y * ac2) / det, (ab.x * ac2 - ac.x * ab2) / det};
  return {a + offset, std::sqrt(squared_norm(offset))};
}

Disk min_enclosing_disk(std::span<const Vec2> points) {
  if (points.empty()) return {};
  std::vector<Vec2> p(points.begin(), points.end());
  std::mt19937 shuffle_rng(static_cast<std::mt19937::result_type>(p.size()));
  std::shuffle(p.begin(), p.end(), shuffle_rng);

  Disk d{p[0], 0.0};
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (d.contains(p[i])) continue;
    d = {p[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (d.contains(p[j])) continue;
      d = disk_through(p[i], p[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!d.contains(p[k])) d = disk_through(p[i], p[j], p[k]);
      }
    }
  }
  return d;
}

}  // namespace beamforge
