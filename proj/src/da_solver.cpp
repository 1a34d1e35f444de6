#include "beamforge/da_solver.hpp"

#include <algorithm>
#include <chrono>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "beamforge/kernels.hpp"
#include "beamforge/min_disk.hpp"

namespace beamforge {

namespace {

struct KernelSet {
  decltype(&kernels::serial::gibbs_rows) gibbs_rows;
  decltype(&kernels::serial::beam_marginals) beam_marginals;
  decltype(&kernels::serial::center_ratio) center_ratio;
  decltype(&kernels::serial::beam_distortion) beam_distortion;
  decltype(&kernels::serial::center_newton) center_newton;
};

KernelSet kernels_for(KernelBackend backend) {
  if (backend == KernelBackend::serial) {
    return {kernels::serial::gibbs_rows, kernels::serial::beam_marginals,
            kernels::serial::center_ratio, kernels::serial::beam_distortion,
            kernels::serial::center_newton};
  }
  return {kernels::omp::gibbs_rows, kernels::omp::beam_marginals, kernels::omp::center_ratio,
          kernels::omp::beam_distortion, kernels::omp::center_newton};
}

std::vector<Vec2> positions(const Scenario& scenario) {
  std::vector<Vec2> out;
  out.reserve(scenario.size());
  for (const auto& t : scenario.terminals()) out.push_back(t.position);
  return out;
}

Vec2 weighted_centroid(const Scenario& scenario) {
  Vec2 c{};
  const auto terminals = scenario.terminals();
  const auto weights = scenario.weights();
  for (std::size_t u = 0; u < terminals.size(); ++u) c = c + weights[u] * terminals[u].position;
  return c;
}

// Normalized distortion is 1 on the coverage boundary, so annealing must reach
// temperatures well below 1 regardless of how wide the instance is.
constexpr double kDefaultTminCap = 1e-4;

// Largest finite magnitude an exponent offset may take; keeps inf - inf out
// of the shifted exponentials.
constexpr double kOffsetLimit = 1e300;

// Load argument of the penalty: raw p(b) or M·p(b), clamped at p_floor.
double load_argument(double marginal, std::size_t m, const SolverConfig& cfg) {
  const double p = std::max(marginal, cfg.p_floor);
  return cfg.lb_relative_load ? static_cast<double>(m) * p : p;
}

void check_gibbs_inputs(const SoftState& state) {
  if (!(state.temperature > 0.0)) throw BeamforgeError("temperature must be positive");
  if (state.beams() == 0) throw BeamforgeError("soft state has no beams");
}

void gibbs_with_offsets(SoftState& state, std::span<const Vec2> users, const Scenario& scenario,
                        const SolverConfig& cfg, const KernelSet& k,
                        std::span<const double> offsets) {
  const std::size_t m = state.beams();
  const kernels::DistortionPower power(cfg.alpha);
  state.assoc.resize(users.size() * m);
  state.log_partition.resize(users.size());
  const double inv_r2 = 1.0 / (scenario.r_max() * scenario.r_max());
  k.gibbs_rows({users, state.centers, offsets, inv_r2, state.temperature}, power, state.assoc,
               state.log_partition);
  state.beam_marginals.resize(m);
  k.beam_marginals(scenario.weights(), state.assoc, m, state.beam_marginals);
}

void refresh_gibbs(SoftState& state, std::span<const Vec2> users, const Scenario& scenario,
                   const SolverConfig& cfg, const KernelSet& k) {
  check_gibbs_inputs(state);
  const std::vector<double> offsets = load_balance_offsets(state, cfg);
  gibbs_with_offsets(state, users, scenario, cfg, k, offsets);
}

// Penalty eta q x^-beta on a beam holding mass q, x = scale q.
struct LoadPenalty {
  double eta;
  double beta;
  double scale;
  double floor;

  [[nodiscard]] double value(double q) const { return eta * q * std::pow(scale * q, -beta); }
  [[nodiscard]] double slope(double q) const {
    return eta * (1.0 - beta) * std::pow(scale * std::max(q, floor), -beta);
  }
  // d q / d lambda of the minimizer below; zero on the floor.
  [[nodiscard]] double load_rate(double q) const {
    if (q <= floor) return 0.0;
    return 1.0 / (eta * beta * (beta - 1.0) * scale * std::pow(scale * q, -beta - 1.0));
  }
  // argmin over q >= floor of value(q) - lambda q, for lambda < 0.
  [[nodiscard]] double load_for(double lambda) const {
    const double x = std::pow((1.0 - beta) * eta / lambda, 1.0 / beta);
    return std::max(x / scale, floor);
  }
};

// Dual of the load-balance association problem at fixed centers. Evaluating
// it at offsets lambda leaves the Gibbs rows for those offsets in `state`.
double lb_dual(SoftState& state, std::span<const Vec2> users, const Scenario& scenario,
               const SolverConfig& cfg, const KernelSet& k, const LoadPenalty& pen,
               std::span<const double> lambda, std::vector<double>& loads) {
  gibbs_with_offsets(state, users, scenario, cfg, k, lambda);
  const auto weights = scenario.weights();
  double acc = 0.0;
  for (std::size_t u = 0; u < weights.size(); ++u) acc += weights[u] * state.log_partition[u];
  double g = -state.temperature * acc;
  loads.resize(lambda.size());
  for (std::size_t b = 0; b < lambda.size(); ++b) {
    loads[b] = pen.load_for(lambda[b]);
    g += pen.value(loads[b]) - lambda[b] * loads[b];
  }
  return g;
}

// Newton ascent on the concave dual. At its maximum the offsets equal the
// penalty slope at the resulting marginals, which is the self-consistent
// load-balance Gibbs distribution.
void settle_load_balance(SoftState& state, std::span<const Vec2> users, const Scenario& scenario,
                         const SolverConfig& cfg, const KernelSet& k) {
  check_gibbs_inputs(state);
  const std::size_t m = state.beams();
  const LoadPenalty pen{cfg.eta, cfg.beta, cfg.lb_relative_load ? static_cast<double>(m) : 1.0,
                        cfg.p_floor};
  std::vector<double> lambda(m);
  for (std::size_t b = 0; b < m; ++b) lambda[b] = pen.slope(state.beam_marginals[b]);

  const auto weights = scenario.weights();
  const double inv_t = 1.0 / state.temperature;
  std::vector<double> loads;
  std::vector<double> trial_loads;
  double g = lb_dual(state, users, scenario, cfg, k, pen, lambda, loads);
  constexpr int kMaxNewton = 100;
  constexpr double kGradTol = 1e-13;
  for (int iter = 0; iter < kMaxNewton; ++iter) {
    Eigen::VectorXd grad(static_cast<Eigen::Index>(m));
    double worst = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      grad[static_cast<Eigen::Index>(b)] = state.beam_marginals[b] - loads[b];
      worst = std::max(worst, std::abs(grad[static_cast<Eigen::Index>(b)]));
    }
    if (worst <= kGradTol) break;

    Eigen::MatrixXd neg_hess = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                     static_cast<Eigen::Index>(m));
    for (std::size_t u = 0; u < weights.size(); ++u) {
      const double* row = state.assoc.data() + u * m;
      const double wu = weights[u] * inv_t;
      for (std::size_t i = 0; i < m; ++i) {
        if (row[i] == 0.0) continue;
        const auto ii = static_cast<Eigen::Index>(i);
        neg_hess(ii, ii) += wu * row[i];
        for (std::size_t j = 0; j < m; ++j)
          neg_hess(ii, static_cast<Eigen::Index>(j)) -= wu * row[i] * row[j];
      }
    }
    for (std::size_t b = 0; b < m; ++b) {
      const auto bb = static_cast<Eigen::Index>(b);
      neg_hess(bb, bb) += pen.load_rate(loads[b]) + 1e-14 * (1.0 + neg_hess(bb, bb));
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(neg_hess);
    Eigen::VectorXd step = ldlt.info() == Eigen::Success ? Eigen::VectorXd(ldlt.solve(grad)) : grad;
    if (!step.allFinite()) step = grad;
    // Gibbs rows move on the scale of T, the penalty on the scale of lambda.
    double shrink = 1.0;
    for (std::size_t b = 0; b < m; ++b) {
      const double reach = 4.0 * state.temperature + 0.5 * std::abs(lambda[b]);
      const double len = std::abs(step[static_cast<Eigen::Index>(b)]);
      if (len > reach) shrink = std::min(shrink, reach / len);
    }
    step *= shrink;
    SoftState trial = state;
    std::vector<double> cand(m);
    // Predicted gain below rounding of the dual itself. The dual can no
    // longer rank steps, so polish on the residual with full steps.
    if (grad.dot(step) <= 1e-14 * (1.0 + std::abs(g))) {
      bool in_domain = true;
      for (std::size_t b = 0; b < m; ++b) {
        cand[b] = lambda[b] + step[static_cast<Eigen::Index>(b)];
        in_domain = in_domain && cand[b] < 0.0 && std::isfinite(cand[b]);
      }
      if (!in_domain) break;
      const double gc = lb_dual(trial, users, scenario, cfg, k, pen, cand, trial_loads);
      double trial_worst = 0.0;
      for (std::size_t b = 0; b < m; ++b)
        trial_worst = std::max(trial_worst, std::abs(trial.beam_marginals[b] - trial_loads[b]));
      if (!(trial_worst < 0.5 * worst)) break;
      g = gc;
      lambda = cand;
      loads = trial_loads;
      state = std::move(trial);
      continue;
    }

    bool accepted = false;
    double t = 1.0;
    for (int halving = 0; halving < 60 && !accepted; ++halving, t *= 0.5) {
      bool in_domain = true;
      for (std::size_t b = 0; b < m; ++b) {
        cand[b] = lambda[b] + t * step[static_cast<Eigen::Index>(b)];
        in_domain = in_domain && cand[b] < 0.0 && std::isfinite(cand[b]);
      }
      if (!in_domain) continue;
      const double gc = lb_dual(trial, users, scenario, cfg, k, pen, cand, trial_loads);
      if (gc >= g - 1e-15 * std::abs(g)) {
        accepted = true;
        g = gc;
        lambda = cand;
        loads = trial_loads;
        state = std::move(trial);
      }
    }
    if (!accepted) break;
  }
}

bool solves_load_balance(const SolverConfig& cfg) {
  return cfg.variant == Variant::load_balance && cfg.eta > 0.0 && cfg.beta > 1.0;
}

double max_move(std::span<const Vec2> a, std::span<const Vec2> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, distance(a[i], b[i]));
  return worst;
}

std::size_t violation_count(const FeasibilityReport& report, bool with_capacity) {
  return report.uncovered + (with_capacity ? report.overloaded_beams : 0);
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::coverage:
      return "da-cov";
    case Variant::capacity:
      return "da-cap";
    case Variant::load_balance:
      return "da-lb";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "da-cov" || name == "coverage") return Variant::coverage;
  if (name == "da-cap" || name == "capacity") return Variant::capacity;
  if (name == "da-lb" || name == "load_balance") return Variant::load_balance;
  throw BeamforgeError("unknown DA variant '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(alpha >= 1.0)) throw BeamforgeError("alpha must be >= 1");
  if (!(beta > 0.0)) throw BeamforgeError("beta must be positive");
  if (!(eta >= 0.0)) throw BeamforgeError("eta must be non-negative");
  if (!(cooling_rate > 0.0 && cooling_rate < 1.0))
    throw BeamforgeError("cooling_rate must lie in (0, 1)");
  if (t_high > 0.0 && t_min > 0.0 && !(t_min < t_high))
    throw BeamforgeError("t_min must be below t_high");
  if (inner_iters == 0) throw BeamforgeError("inner_iters must be positive");
  if (!(inner_tol > 0.0 && split_perturbation > 0.0 && merge_threshold > 0.0 && p_floor > 0.0))
    throw BeamforgeError("tolerances must be positive");
}

SoftState initial_state(const Scenario& scenario, double temperature) {
  SoftState s;
  s.centers = {weighted_centroid(scenario)};
  s.assoc.assign(scenario.size(), 1.0);
  s.beam_marginals = {1.0};
  s.log_partition.assign(scenario.size(), 0.0);
  s.temperature = temperature;
  return s;
}

double initial_temperature(const Scenario& scenario, const SolverConfig& cfg) {
  if (cfg.t_high > 0.0) return cfg.t_high;
  const Vec2 c = weighted_centroid(scenario);
  double worst = 0.0;
  for (const auto& t : scenario.terminals())
    worst = std::max(worst, distortion(t.position, c, cfg.alpha, scenario.r_max()));
  return worst > 0.0 ? 2.0 * worst : 1.0;
}

std::vector<double> load_balance_offsets(const SoftState& state, const SolverConfig& cfg) {
  if (cfg.variant != Variant::load_balance) return {};
  const std::size_t m = state.beams();
  std::vector<double> offsets(m);
  // d(x) + x d'(x) with d(x) = x^-beta collapses to (1 - beta) x^-beta.
  for (std::size_t b = 0; b < m; ++b) {
    const double x = load_argument(state.beam_marginals[b], m, cfg);
    const double term = cfg.eta * (1.0 - cfg.beta) * std::pow(x, -cfg.beta);
    offsets[b] = std::clamp(term, -kOffsetLimit, kOffsetLimit);
  }
  return offsets;
}

SoftState gibbs_update(SoftState state, const Scenario& scenario, const SolverConfig& cfg) {
  const auto users = positions(scenario);
  refresh_gibbs(state, users, scenario, cfg, kernels_for(cfg.backend));
  return state;
}

SoftState gibbs_equilibrium(SoftState state, const Scenario& scenario, const SolverConfig& cfg) {
  const auto users = positions(scenario);
  const KernelSet k = kernels_for(cfg.backend);
  if (solves_load_balance(cfg)) {
    settle_load_balance(state, users, scenario, cfg, k);
  } else {
    refresh_gibbs(state, users, scenario, cfg, k);
  }
  return state;
}

SoftState center_update(SoftState state, const Scenario& scenario, const SolverConfig& cfg) {
  const auto users = positions(scenario);
  const std::size_t m = state.beams();
  std::vector<Vec2> target(m);
  std::vector<double> weight(m);
  const double inv_r2 = 1.0 / (scenario.r_max() * scenario.r_max());
  kernels_for(cfg.backend)
      .center_ratio(users, state.centers, scenario.weights(), state.assoc,
                    kernels::DistortionPower(cfg.alpha), inv_r2, target, weight);
  std::vector<double> mass(m);
  kernels_for(cfg.backend).beam_marginals(scenario.weights(), state.assoc, m, mass);
  for (std::size_t b = 0; b < m; ++b) {
    if (mass[b] >= 1e-15) state.centers[b] = target[b];
  }
  return state;
}

double free_energy(const SoftState& state, const Scenario& scenario, const SolverConfig& cfg) {
  const auto weights = scenario.weights();
  double acc = 0.0;
  for (std::size_t u = 0; u < weights.size(); ++u) acc += weights[u] * state.log_partition[u];
  double f = -state.temperature * acc;
  if (cfg.variant == Variant::load_balance) {
    // -eta sum_b p^2 d'(p) with p d'(p) = -beta x^-beta.
    const std::size_t m = state.beams();
    double penalty = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      const double x = load_argument(state.beam_marginals[b], m, cfg);
      penalty += state.beam_marginals[b] * cfg.beta * std::pow(x, -cfg.beta);
    }
    f += cfg.eta * std::min(penalty, kOffsetLimit);
  }
  return f;
}

SoftState descent_center_step(SoftState state, const Scenario& scenario, const SolverConfig& cfg) {
  const auto users = positions(scenario);
  const KernelSet k = kernels_for(cfg.backend);
  const kernels::DistortionPower power(cfg.alpha);
  const std::size_t m = state.beams();
  const double inv_r2 = 1.0 / (scenario.r_max() * scenario.r_max());
  const auto weights = scenario.weights();

  std::vector<Vec2> target(m);
  std::vector<unsigned char> newton_ok(m);
  k.center_newton(users, state.centers, weights, state.assoc, power, inv_r2, target, newton_ok);
  if (std::find(newton_ok.begin(), newton_ok.end(), 0) != newton_ok.end()) {
    std::vector<Vec2> ratio(m);
    std::vector<double> denom(m);
    k.center_ratio(users, state.centers, weights, state.assoc, power, inv_r2, ratio, denom);
    for (std::size_t b = 0; b < m; ++b)
      if (!newton_ok[b]) target[b] = ratio[b];
  }
  std::vector<double> mass(m);
  k.beam_marginals(weights, state.assoc, m, mass);

  std::vector<double> current(m);
  k.beam_distortion(users, state.centers, weights, state.assoc, power, inv_r2, current);

  std::vector<Vec2> trial = target;
  std::vector<double> trial_cost(m);
  std::vector<bool> settled(m, false);
  for (std::size_t b = 0; b < m; ++b) {
    if (mass[b] < 1e-15 || target[b] == state.centers[b]) {
      trial[b] = state.centers[b];
      settled[b] = true;
    }
  }
  double step = 1.0;
  constexpr int kMaxHalvings = 40;
  for (int attempt = 0; attempt <= kMaxHalvings; ++attempt) {
    if (std::all_of(settled.begin(), settled.end(), [](bool s) { return s; })) break;
    k.beam_distortion(users, trial, weights, state.assoc, power, inv_r2, trial_cost);
    step *= 0.5;
    for (std::size_t b = 0; b < m; ++b) {
      if (settled[b]) continue;
      if (trial_cost[b] <= current[b]) {
        settled[b] = true;
      } else if (attempt == kMaxHalvings) {
        trial[b] = state.centers[b];
      } else {
        trial[b] = state.centers[b] + step * (target[b] - state.centers[b]);
      }
    }
  }
  state.centers = std::move(trial);
  return state;
}

BeamPlan harden(const SoftState& state, const Scenario& scenario) {
  const std::size_t m = state.beams();
  std::vector<std::size_t> assignment(scenario.size());
  for (std::size_t u = 0; u < scenario.size(); ++u) {
    const double* row = state.assoc.data() + u * m;
    assignment[u] = static_cast<std::size_t>(std::max_element(row, row + m) - row);
  }
  return make_plan(scenario, state.centers, std::move(assignment));
}

BeamPlan relieve_overloads(const BeamPlan& plan, const SoftState& state, const Scenario& scenario) {
  const std::size_t m = plan.beam_count();
  const double c = scenario.c_max();
  const double reach = scenario.r_max() * (1.0 + kCoverageSlack);
  const auto terminals = scenario.terminals();
  std::vector<std::size_t> assignment = plan.assignment;
  std::vector<double> load = plan.per_beam_load;
  for (std::size_t b = 0; b < m; ++b) {
    while (load[b] > c) {
      std::size_t best_u = terminals.size();
      std::size_t best_b = m;
      double best_p = -1.0;
      for (std::size_t u = 0; u < terminals.size(); ++u) {
        if (assignment[u] != b) continue;
        for (std::size_t to = 0; to < m; ++to) {
          if (to == b || load[to] + terminals[u].demand_mbps > c) continue;
          if (distance(terminals[u].position, plan.centers[to]) > reach) continue;
          if (state.p(u, to) > best_p) {
            best_p = state.p(u, to);
            best_u = u;
            best_b = to;
          }
        }
      }
      if (best_b == m) break;
      assignment[best_u] = best_b;
      load[b] -= terminals[best_u].demand_mbps;
      load[best_b] += terminals[best_u].demand_mbps;
    }
  }
  return make_plan(scenario, plan.centers, std::move(assignment));
}

BeamPlan recenter_plan(const BeamPlan& plan, const Scenario& scenario) {
  std::vector<std::vector<Vec2>> members(plan.beam_count());
  const auto terminals = scenario.terminals();
  for (std::size_t u = 0; u < terminals.size(); ++u)
    members[plan.assignment[u]].push_back(terminals[u].position);
  BeamPlan out = plan;
  for (std::size_t b = 0; b < plan.beam_count(); ++b)
    if (!members[b].empty()) out.centers[b] = min_enclosing_disk(members[b]).center;
  return out;
}

std::size_t select_split_donor(const SoftState& state, const Scenario& scenario,
                               const SolverConfig& cfg) {
  const BeamPlan plan = harden(state, scenario);
  if (cfg.enforces_capacity()) {
    const auto heaviest = std::max_element(plan.per_beam_load.begin(), plan.per_beam_load.end());
    if (*heaviest > scenario.c_max())
      return static_cast<std::size_t>(heaviest - plan.per_beam_load.begin());
  }
  std::vector<std::vector<Vec2>> members(plan.beam_count());
  const auto terminals = scenario.terminals();
  for (std::size_t u = 0; u < terminals.size(); ++u)
    members[plan.assignment[u]].push_back(terminals[u].position);
  std::vector<double> reach(plan.beam_count(), 0.0);
  for (std::size_t b = 0; b < plan.beam_count(); ++b)
    if (!members[b].empty()) reach[b] = min_enclosing_disk(members[b]).radius;
  return static_cast<std::size_t>(std::max_element(reach.begin(), reach.end()) - reach.begin());
}

SoftState split_beam(SoftState state, const Scenario& scenario, const SolverConfig& cfg,
                     std::mt19937_64& rng) {
  const std::size_t m = state.beams();
  if (m >= scenario.b_max()) throw BeamCapReached();
  const std::size_t donor = select_split_donor(state, scenario, cfg);

  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double theta = angle(rng);
  const double radius = cfg.split_perturbation * scenario.r_max();
  state.centers.push_back(state.centers[donor] + Vec2{radius * std::cos(theta), radius * std::sin(theta)});

  const std::size_t users = state.users();
  std::vector<double> assoc(users * (m + 1));
  for (std::size_t u = 0; u < users; ++u) {
    std::copy_n(state.assoc.begin() + static_cast<std::ptrdiff_t>(u * m), m,
                assoc.begin() + static_cast<std::ptrdiff_t>(u * (m + 1)));
    const double half = 0.5 * state.assoc[u * m + donor];
    assoc[u * (m + 1) + donor] = half;
    assoc[u * (m + 1) + m] = half;
  }
  state.assoc = std::move(assoc);
  state.beam_marginals[donor] *= 0.5;
  state.beam_marginals.push_back(state.beam_marginals[donor]);
  return state;
}

SoftState merge_beams(SoftState state, const Scenario& scenario, const SolverConfig& cfg) {
  const double threshold = cfg.merge_threshold * scenario.r_max();
  const std::size_t users = state.users();
  for (;;) {
    const std::size_t m = state.beams();
    std::size_t keep = m;
    std::size_t drop = m;
    for (std::size_t i = 0; i < m && keep == m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (distance(state.centers[i], state.centers[j]) <= threshold) {
          keep = i;
          drop = j;
          break;
        }
      }
    }
    if (keep == m) break;

    const double pk = state.beam_marginals[keep];
    const double pd = state.beam_marginals[drop];
    state.centers[keep] = pk + pd > 0.0
                              ? (1.0 / (pk + pd)) * (pk * state.centers[keep] + pd * state.centers[drop])
                              : 0.5 * (state.centers[keep] + state.centers[drop]);
    state.beam_marginals[keep] = pk + pd;

    std::vector<double> assoc(users * (m - 1));
    for (std::size_t u = 0; u < users; ++u) {
      const double* row = state.assoc.data() + u * m;
      double* out = assoc.data() + u * (m - 1);
      for (std::size_t b = 0, o = 0; b < m; ++b) {
        if (b == drop) continue;
        out[o++] = b == keep ? row[keep] + row[drop] : row[b];
      }
    }
    state.assoc = std::move(assoc);
    state.centers.erase(state.centers.begin() + static_cast<std::ptrdiff_t>(drop));
    state.beam_marginals.erase(state.beam_marginals.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return state;
}

SolveResult solve(const Scenario& scenario, const SolverConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const auto users = positions(scenario);
  const KernelSet k = kernels_for(cfg.backend);
  const bool with_capacity = cfg.enforces_capacity();
  const double tol = cfg.inner_tol * scenario.r_max();

  const double t_high = initial_temperature(scenario, cfg);
  const double t_min = cfg.t_min > 0.0 ? cfg.t_min : std::min(1e-8 * t_high, kDefaultTminCap);
  std::mt19937_64 rng(cfg.seed);

  SolveResult result;
  SoftState state = initial_state(scenario, t_high);
  std::size_t best_violations = scenario.size() + scenario.b_max() + 1;

  for (std::size_t outer = 0; state.temperature >= t_min; ++outer) {
    double moved = tol;
    for (std::size_t it = 0;; ++it) {
      if (solves_load_balance(cfg)) {
        settle_load_balance(state, users, scenario, cfg, k);
      } else {
        refresh_gibbs(state, users, scenario, cfg, k);
      }
      state.free_energy = free_energy(state, scenario, cfg);
      if (cfg.record_inner) {
        result.inner_trace.push_back(
            {outer, it, state.temperature, state.beams(), state.free_energy});
      }
      if (moved < tol || it == cfg.inner_iters) break;
      std::vector<Vec2> before = state.centers;
      state = descent_center_step(std::move(state), scenario, cfg);
      moved = max_move(before, state.centers);
    }

    BeamPlan soft_plan = harden(state, scenario);
    if (with_capacity && scenario.capacity_bounded())
      soft_plan = relieve_overloads(soft_plan, state, scenario);
    const BeamPlan plan = cfg.recenter_plan ? recenter_plan(soft_plan, scenario) : soft_plan;
    const FeasibilityReport report = check_feasibility(scenario, plan);
    const bool feasible = report.feasible(with_capacity);
    result.trace.push_back({state.temperature, state.beams(), state.free_energy, feasible});

    const std::size_t violations = violation_count(report, with_capacity);
    if (violations <= best_violations) {
      best_violations = violations;
      result.plan = compact_plan(scenario, plan);
    }
    if (feasible) {
      result.feasible = true;
      break;
    }
    if (state.beams() < scenario.b_max()) {
      state = split_beam(std::move(state), scenario, cfg, rng);
    } else {
      result.hit_beam_cap = true;
    }
    state = merge_beams(std::move(state), scenario, cfg);
    state.temperature *= cfg.cooling_rate;
  }

  result.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace beamforge
