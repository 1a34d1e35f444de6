#include <algorithm>
#include <limits>

#include "beamforge/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace beamforge::kernels::omp {

namespace {
// Below this many user-beam pairs a parallel region costs more than it saves.
constexpr std::size_t kMinParallelWork = 1 << 14;
}  // namespace

int thread_count(std::size_t users, std::size_t beams) {
#ifdef _OPENMP
  if (users * beams < kMinParallelWork || omp_in_parallel()) return 1;
  return omp_get_max_threads();
#else
  (void)users;
  (void)beams;
  return 1;
#endif
}

void gibbs_rows(const GibbsInputs& in, const DistortionPower& power, std::span<double> assoc,
                std::span<double> log_partition) {
  const std::size_t m = in.centers.size();
  const std::size_t n = in.users.size();
  const bool offsets = !in.beam_offsets.empty();
  [[maybe_unused]] const int threads = thread_count(n, m);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t u = 0; u < n; ++u) {
    double* row = assoc.data() + u * m;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < m; ++b) {
      const double s = squared_norm(in.users[u] - in.centers[b]) * in.inv_r2;
      row[b] = power.of_squared(s) + (offsets ? in.beam_offsets[b] : 0.0);
      lowest = std::min(lowest, row[b]);
    }
    double z = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      row[b] = std::exp(-(row[b] - lowest) / in.temperature);
      z += row[b];
    }
    for (std::size_t b = 0; b < m; ++b) row[b] /= z;
    log_partition[u] = -lowest / in.temperature + std::log(z);
  }
}

void beam_marginals(std::span<const double> weights, std::span<const double> assoc,
                    std::size_t m, std::span<double> marginals) {
  const std::size_t n = weights.size();
  [[maybe_unused]] const int threads = thread_count(n, m);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t b = 0; b < m; ++b) {
    double acc = 0.0;
    for (std::size_t u = 0; u < n; ++u) acc += weights[u] * assoc[u * m + b];
    marginals[b] = acc;
  }
}

void center_ratio(std::span<const Vec2> users, std::span<const Vec2> centers,
                  std::span<const double> weights, std::span<const double> assoc,
                  const DistortionPower& power, double inv_r2, std::span<Vec2> target,
                  std::span<double> total_weight) {
  const std::size_t m = centers.size();
  const std::size_t n = users.size();
  [[maybe_unused]] const int threads = thread_count(n, m);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t b = 0; b < m; ++b) {
    Vec2 num{};
    double den = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const double s = squared_norm(users[u] - centers[b]) * inv_r2;
      const double g = weights[u] * assoc[u * m + b] * power.weight_of_squared(s);
      num = num + g * users[u];
      den += g;
    }
    total_weight[b] = den;
    target[b] = den > 0.0 ? (1.0 / den) * num : centers[b];
  }
}

void center_newton(std::span<const Vec2> users, std::span<const Vec2> centers,
                   std::span<const double> weights, std::span<const double> assoc,
                   const DistortionPower& power, double inv_r2, std::span<Vec2> target,
                   std::span<unsigned char> ok) {
  const std::size_t m = centers.size();
  const std::size_t n = users.size();
  const double curvature = power.alpha() - 2.0;
  [[maybe_unused]] const int threads = thread_count(n, m);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t b = 0; b < m; ++b) {
    double gx = 0.0, gy = 0.0, hxx = 0.0, hxy = 0.0, hyy = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const Vec2 v = centers[b] - users[u];
      const double s = squared_norm(v) * inv_r2;
      const double c = weights[u] * assoc[u * m + b];
      const double w = c * power.weight_of_squared(s);
      gx += w * v.x;
      gy += w * v.y;
      hxx += w;
      hyy += w;
      if (s > 0.0) {
        const double k = curvature * w * inv_r2 / s;
        hxx += k * v.x * v.x;
        hxy += k * v.x * v.y;
        hyy += k * v.y * v.y;
      }
    }
    const double det = hxx * hyy - hxy * hxy;
    if (!(det > 0.0) || !(hxx > 0.0) || !std::isfinite(det)) {
      target[b] = centers[b];
      ok[b] = 0;
      continue;
    }
    target[b] = {centers[b].x - (hyy * gx - hxy * gy) / det,
                 centers[b].y - (hxx * gy - hxy * gx) / det};
    ok[b] = 1;
  }
}

void beam_distortion(std::span<const Vec2> users, std::span<const Vec2> centers,
                     std::span<const double> weights, std::span<const double> assoc,
                     const DistortionPower& power, double inv_r2, std::span<double> per_beam) {
  const std::size_t m = centers.size();
  const std::size_t n = users.size();
  [[maybe_unused]] const int threads = thread_count(n, m);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t b = 0; b < m; ++b) {
    double acc = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const double s = squared_norm(users[u] - centers[b]) * inv_r2;
      acc += weights[u] * assoc[u * m + b] * power.of_squared(s);
    }
    per_beam[b] = acc;
  }
}

}  // namespace beamforge::kernels::omp
