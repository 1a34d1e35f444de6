#pragma once

// Inner-loop kernels of the annealing solver over flat row-major buffers.
// `assoc` is U×M, row u holding p(b|u). Two builds share one signature set:
// `serial` is the reference, `omp` parallelizes over users (row kernels) or
// beams (column reductions). Every reduction keeps the serial summation order,
// so both produce bit-identical output.

#include <cmath>
#include <cstddef>
#include <span>

#include "beamforge/scenario.hpp"

namespace beamforge::kernels {

// Normalized distortion s^(alpha/2) where s = |u - c|^2 / r^2. Even integer
// alphas skip std::pow.
class DistortionPower {
 public:
  explicit DistortionPower(double alpha);

  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double of_squared(double s) const { return raise(s, half_, int_half_); }
  // Center-update weight d^(1 - 2/alpha) = s^(alpha/2 - 1).
  [[nodiscard]] double weight_of_squared(double s) const;

 private:
  static double raise(double s, double exponent, int int_exponent) {
    if (int_exponent >= 0) {
      double acc = 1.0;
      for (int i = 0; i < int_exponent; ++i) acc *= s;
      return acc;
    }
    return std::pow(s, exponent);
  }

  double alpha_;
  double half_;
  int int_half_;
};

inline constexpr double kZeroDistanceWeight = 1e-12;

struct GibbsInputs {
  std::span<const Vec2> users;
  std::span<const Vec2> centers;
  // Per-beam additive exponent term; empty means zero.
  std::span<const double> beam_offsets;
  double inv_r2;
  double temperature;
};

namespace serial {

// Fills assoc with Gibbs rows and log_partition[u] = log Z_u.
void gibbs_rows(const GibbsInputs& in, const DistortionPower& power, std::span<double> assoc,
                std::span<double> log_partition);

// p(b) = sum_u p(u) p(b|u).
void beam_marginals(std::span<const double> weights, std::span<const double> assoc,
                    std::size_t m, std::span<double> marginals);

// Weighted-mean center formula; total_weight[b] receives its denominator.
void center_ratio(std::span<const Vec2> users, std::span<const Vec2> centers,
                  std::span<const double> weights, std::span<const double> assoc,
                  const DistortionPower& power, double inv_r2, std::span<Vec2> target,
                  std::span<double> total_weight);

// Newton step on the per-beam distortion sum_u p(u) p(b|u) d(u, x_b):
// target[b] = x_b - H^-1 g. ok[b] = 0 where the Hessian is not positive
// definite (target left at x_b).
void center_newton(std::span<const Vec2> users, std::span<const Vec2> centers,
                   std::span<const double> weights, std::span<const double> assoc,
                   const DistortionPower& power, double inv_r2, std::span<Vec2> target,
                   std::span<unsigned char> ok);

// Per-beam distortion sum_u p(u) p(b|u) d(u,b) for the given centers.
void beam_distortion(std::span<const Vec2> users, std::span<const Vec2> centers,
                     std::span<const double> weights, std::span<const double> assoc,
                     const DistortionPower& power, double inv_r2, std::span<double> per_beam);

}  // namespace serial

namespace omp {

// Fills assoc with Gibbs rows and log_partition[u] = log Z_u.
void gibbs_rows(const GibbsInputs& in, const DistortionPower& power, std::span<double> assoc,
                std::span<double> log_partition);

// p(b) = sum_u p(u) p(b|u).
void beam_marginals(std::span<const double> weights, std::span<const double> assoc,
                    std::size_t m, std::span<double> marginals);

// Weighted-mean center formula; total_weight[b] receives its denominator.
void center_ratio(std::span<const Vec2> users, std::span<const Vec2> centers,
                  std::span<const double> weights, std::span<const double> assoc,
                  const DistortionPower& power, double inv_r2, std::span<Vec2> target,
                  std::span<double> total_weight);

// Newton step on the per-beam distortion sum_u p(u) p(b|u) d(u, x_b):
// target[b] = x_b - H^-1 g. ok[b] = 0 where the Hessian is not positive
// definite (target left at x_b).
void center_newton(std::span<const Vec2> users, std::span<const Vec2> centers,
                   std::span<const double> weights, std::span<const double> assoc,
                   const DistortionPower& power, double inv_r2, std::span<Vec2> target,
                   std::span<unsigned char> ok);

// Per-beam distortion sum_u p(u) p(b|u) d(u,b) for the given centers.
void beam_distortion(std::span<const Vec2> users, std::span<const Vec2> centers,
                     std::span<const double> weights, std::span<const double> assoc,
                     const DistortionPower& power, double inv_r2, std::span<double> per_beam);

// Threads the parallel kernels use for a problem of this size.
[[nodiscard]] int thread_count(std::size_t users, std::size_t beams);

}  // namespace omp

}  // namespace beamforge::kernels
