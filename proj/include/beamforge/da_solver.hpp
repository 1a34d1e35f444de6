#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "beamforge/scenario.hpp"

namespace beamforge {

enum class Variant { coverage, capacity, load_balance };
enum class KernelBackend { serial, openmp };

[[nodiscard]] std::string_view to_string(Variant v);
[[nodiscard]] Variant parse_variant(std::string_view name);

struct SolverConfig {
  Variant variant{Variant::coverage};
  double alpha{10.0};
  double beta{10.0};
  double eta{0.5};
  // Non-positive means derive from the scenario: t_high = 2 max_u d(u, centroid),
  // t_min = min(1e-8 t_high, 1e-4).
  double t_high{0.0};
  double t_min{0.0};
  double cooling_rate{0.95};
  std::size_t inner_iters{100};
  double inner_tol{1e-4};           // fraction of r_max
  double split_perturbation{1e-2};  // fraction of r_max
  double merge_threshold{1e-3};     // fraction of r_max
  double p_floor{1e-6};
  // Load-balance penalty on M·p(b) (1 at an even split) instead of raw p(b).
  bool lb_relative_load{true};
  // Re-center each hard beam on its members' minimum enclosing disk before
  // the feasibility test.
  bool recenter_plan{true};
  std::uint64_t seed{1};
  KernelBackend backend{KernelBackend::openmp};
  bool record_inner{false};

  void validate() const;
  [[nodiscard]] bool enforces_capacity() const { return variant != Variant::coverage; }
};

// Live annealing state. `assoc` is row-major U×M.
struct SoftState {
  std::vector<Vec2> centers;
  std::vector<double> assoc;
  std::vector<double> beam_marginals;
  std::vector<double> log_partition;
  double temperature{1.0};
  double free_energy{0.0};

  [[nodiscard]] std::size_t beams() const { return centers.size(); }
  [[nodiscard]] std::size_t users() const { return log_partition.size(); }
  [[nodiscard]] double p(std::size_t u, std::size_t b) const { return assoc[u * beams() + b]; }
};

// One beam at the p(u)-weighted centroid with all association mass on it.
[[nodiscard]] SoftState initial_state(const Scenario& scenario, double temperature);

[[nodiscard]] double initial_temperature(const Scenario& scenario, const SolverConfig& cfg);

// Per-beam exponent offset of the load-balance variant, evaluated at the
// state's current marginals. Empty for other variants.
[[nodiscard]] std::vector<double> load_balance_offsets(const SoftState& state,
                                                       const SolverConfig& cfg);

[[nodiscard]] SoftState gibbs_update(SoftState state, const Scenario& scenario,
                                     const SolverConfig& cfg);
// Associations consistent with their own marginals. For the load-balance
// variant (beta > 1) the free energy is convex in the associations at fixed
// centers, and its unique minimizer is found by Newton ascent on the dual in
// the per-beam offsets; gibbs_update alone evaluates the offsets at the
// previous marginals. Other variants: same as gibbs_update.
[[nodiscard]] SoftState gibbs_equilibrium(SoftState state, const Scenario& scenario,
                                          const SolverConfig& cfg);
[[nodiscard]] SoftState center_update(SoftState state, const Scenario& scenario,
                                      const SolverConfig& cfg);
[[nodiscard]] double free_energy(const SoftState& state, const Scenario& scenario,
                                 const SolverConfig& cfg);

// Solver's center step: solves the same stationarity condition as
// center_update with a per-beam Newton step (ratio formula where the Hessian
// degenerates), halving the step until that beam's distortion under the
// current associations does not increase. The free energy therefore never
// rises across an alternation step.
[[nodiscard]] SoftState descent_center_step(SoftState state, const Scenario& scenario,
                                            const SolverConfig& cfg);

// Hard plan by row argmax, lowest index on ties. Empty beams are kept so beam
// indices match the soft state.
[[nodiscard]] BeamPlan harden(const SoftState& state, const Scenario& scenario);

// Moves users off beams over c_max onto other beams that cover them and have
// room, highest association first. Beams never become overloaded by a move.
// Needed because users with identical rows all land on one beam under argmax.
[[nodiscard]] BeamPlan relieve_overloads(const BeamPlan& plan, const SoftState& state,
                                         const Scenario& scenario);

// Moves every nonempty beam to the minimum enclosing disk of its members.
[[nodiscard]] BeamPlan recenter_plan(const BeamPlan& plan, const Scenario& scenario);

[[nodiscard]] std::size_t select_split_donor(const SoftState& state, const Scenario& scenario,
                                             const SolverConfig& cfg);

class BeamCapReached : public BeamforgeError {
 public:
  BeamCapReached() : BeamforgeError("beam count already at b_max") {}
};

[[nodiscard]] SoftState split_beam(SoftState state, const Scenario& scenario,
                                   const SolverConfig& cfg, std::mt19937_64& rng);
[[nodiscard]] SoftState merge_beams(SoftState state, const Scenario& scenario,
                                    const SolverConfig& cfg);

struct TraceRecord {
  double temperature;
  std::size_t beams;
  double free_energy;
  bool feasible;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct InnerRecord {
  std::size_t outer_step;
  std::size_t iteration;
  double temperature;
  std::size_t beams;
  double free_energy;

  friend bool operator==(const InnerRecord&, const InnerRecord&) = default;
};

struct SolveResult {
  BeamPlan plan;  // compacted: no empty beams
  bool feasible{false};
  bool hit_beam_cap{false};
  std::vector<TraceRecord> trace;
  std::vector<InnerRecord> inner_trace;
  double runtime_s{0.0};
};

[[nodiscard]] SolveResult solve(const Scenario& scenario, const SolverConfig& cfg);

}  // namespace beamforge
