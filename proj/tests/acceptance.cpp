#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "beamforge/da_solver.hpp"
#include "beamforge/generator.hpp"
#include "beamforge/oracle.hpp"
#include "beamforge/sweep.hpp"

using namespace beamforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

Scenario points(std::vector<Vec2> pos, double r) {
  std::vector<Terminal> t;
  for (std::size_t i = 0; i < pos.size(); ++i) t.push_back({"t" + std::to_string(i), pos[i], 5.0});
  return Scenario(std::move(t), {r, kUnbounded, 32, Weighting::uniform});
}

SoftState uniform_state(const Scenario& s, std::vector<Vec2> centers, double t) {
  SoftState st = initial_state(s, t);
  const std::size_t m = centers.size();
  st.centers = std::move(centers);
  st.assoc.assign(s.size() * m, 1.0 / static_cast<double>(m));
  st.beam_marginals.assign(m, 1.0 / static_cast<double>(m));
  return st;
}

Outcome oracle_gap() {
  const auto t0 = Clock::now();
  std::size_t bad = 0;
  std::size_t exact = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const std::size_t users = 3 + i % 8;
    const double r = 4.5;
    const Scenario s = generate(users, 6 * r, {5, 10}, 1000 + i, {r, kUnbounded, 32});
    const std::size_t opt = exact_min_cover(s, false).beam_count();
    SolverConfig cfg;
    cfg.seed = i;
    const SolveResult res = solve(s, cfg);
    const std::size_t k = res.plan.beam_count();
    if (!res.feasible || k < opt || k > opt + 1) ++bad;
    if (k == opt) ++exact;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 120.0, "50 instances, " + std::to_string(exact) + " at optimum, " +
                                        std::to_string(bad) + " outside [opt, opt+1], " +
                                        fmt(secs, 1) + " s"};
}

ExperimentSpec grid(Method m, std::vector<std::size_t> us, std::vector<double> rs,
                    std::vector<double> cs, double extent, std::size_t b_max) {
  ExperimentSpec spec;
  spec.method = m;
  spec.u_values = std::move(us);
  spec.r_max_values = std::move(rs);
  spec.c_max_values = std::move(cs);
  spec.runs_per_cell = 10;
  spec.cc_repeats = 100;
  spec.extent_km = extent;
  spec.b_max = b_max;
  return spec;
}

Outcome da_vs_cc() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail;
  for (std::size_t u : {50, 100}) {
    const SweepResult da = run_sweep(grid(Method::da_cov, {u}, {4.5, 6.0}, {kUnbounded}, 100.0, u));
    const SweepResult cc = run_sweep(grid(Method::cc, {u}, {4.5, 6.0}, {kUnbounded}, 100.0, u));
    for (std::size_t c = 0; c < da.cells.size(); ++c) {
      const bool ok = da.cells[c].mean_beams <= cc.cells[c].mean_beams &&
                      da.cells[c].feasible_runs == 10;
      pass = pass && ok;
      detail += "U=" + std::to_string(u) + " r=" + fmt(da.cells[c].r_max, 1) + ": DA " +
                fmt(da.cells[c].mean_beams, 2) + " vs CC " + fmt(cc.cells[c].mean_beams, 2) + "; ";
    }
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 900.0;
  return {pass, detail + fmt(secs, 1) + " s"};
}

Outcome capacity_trend() {
  bool pass = true;
  std::string detail;
  const std::pair<std::size_t, double> cells[] = {{50, 10.0}, {100, 15.0}};
  for (const auto& [u, r] : cells) {
    const SweepResult res =
        run_sweep(grid(Method::da_cap, {u}, {r}, {kUnbounded, 150.0, 120.0, 100.0}, 2 * r, 32));
    detail += "U=" + std::to_string(u) + " r=" + fmt(r, 0) + ":";
    double prev = 0.0;
    for (const CellRecord& c : res.cells) {
      pass = pass && c.mean_beams >= prev && c.feasible_runs == 10;
      prev = c.mean_beams;
      detail += " " + fmt(c.mean_beams, 1);
    }
    detail += "; ";
  }
  return {pass, detail + "c_max inf,150,120,100"};
}

Outcome load_balance_effect() {
  const SweepResult cov = run_sweep(grid(Method::da_cov, {100}, {10.0}, {kUnbounded}, 100.0, 100));
  const SweepResult lb = run_sweep(grid(Method::da_lb, {100}, {10.0}, {kUnbounded}, 100.0, 100));
  const CellRecord& a = cov.cells[0];
  const CellRecord& b = lb.cells[0];
  const bool pass = b.mean_load_std < a.mean_load_std && b.mean_beams >= a.mean_beams &&
                    a.feasible_runs == 10 && b.feasible_runs == 10;
  return {pass, "load std LB " + fmt(b.mean_load_std, 5) + " vs COV " + fmt(a.mean_load_std, 5) +
                    ", beams LB " + fmt(b.mean_beams, 1) + " vs COV " + fmt(a.mean_beams, 1)};
}

Outcome free_energy_descent() {
  std::size_t violations = 0;
  std::size_t steps = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Scenario s = generate(20 + 2 * i, 40.0, {5, 10}, 7000 + i,
                                {5.0 + static_cast<double>(i % 5), kUnbounded, 64});
    SolverConfig cfg;
    cfg.seed = i;
    cfg.record_inner = true;
    const SolveResult res = solve(s, cfg);
    const auto& tr = res.inner_trace;
    for (std::size_t k = 1; k < tr.size(); ++k) {
      if (tr[k].outer_step != tr[k - 1].outer_step || tr[k].beams != tr[k - 1].beams ||
          tr[k].temperature != tr[k - 1].temperature)
        continue;
      ++steps;
      const double rise = tr[k].free_energy - tr[k - 1].free_energy;
      worst = std::max(worst, rise);
      if (rise > 1e-8) ++violations;
    }
  }
  return {violations == 0 && steps > 0, std::to_string(steps) + " inner steps, " +
                                            std::to_string(violations) +
                                            " rises, largest rise " + sci(worst)};
}

Outcome scalar_fixtures() {
  double worst = 0.0;
  {
    const Scenario s = points({{0, 0}}, 1.0);
    SolverConfig cfg;
    cfg.alpha = 2.0;
    const SoftState st = gibbs_update(uniform_state(s, {{1, 0}, {2, 0}}, 1.0), s, cfg);
    const long double e1 = std::exp(-1.0L);
    const long double e4 = std::exp(-4.0L);
    worst = std::max(worst, std::abs(st.p(0, 0) - static_cast<double>(e1 / (e1 + e4))));
  }
  {
    const std::vector<Vec2> us{{0, 0}, {1, 0}, {0, 1}};
    const Scenario s = points(us, 1.0);
    const Vec2 start{0.2, 0.3};
    const SoftState st = center_update(uniform_state(s, {start}, 1.0), s, SolverConfig{});
    long double nx = 0, ny = 0, den = 0;
    for (const Vec2& u : us) {
      const long double dx = u.x - start.x, dy = u.y - start.y;
      const long double d = std::pow(std::sqrt(dx * dx + dy * dy), 10.0L);
      const long double w = std::pow(d, 1.0L - 2.0L / 10.0L);
      nx += w * u.x;
      ny += w * u.y;
      den += w;
    }
    worst = std::max(worst, std::abs(st.centers[0].x - static_cast<double>(nx / den)));
    worst = std::max(worst, std::abs(st.centers[0].y - static_cast<double>(ny / den)));
  }
  {
    std::vector<Vec2> us;
    const long double rho = 0.8L;
    for (int k = 0; k < 7; ++k)
      us.push_back({static_cast<double>(rho * std::cos(0.9L * k)),
                    static_cast<double>(rho * std::sin(0.9L * k))});
    const Scenario s = points(us, 1.0);
    SolverConfig cfg;
    long double want = 0;
    for (const Vec2& u : us) want += std::pow(std::hypot((long double)u.x, (long double)u.y), 10.0L);
    want /= 7.0L;  // equal distortions, so F* is their common value
    for (double t : {1e-4, 0.5, 100.0}) {
      const SoftState st = gibbs_update(uniform_state(s, {{0, 0}}, t), s, cfg);
      worst = std::max(worst, std::abs(free_energy(st, s, cfg) - static_cast<double>(want)));
    }
  }
  return {worst <= 1e-10, "largest deviation " + sci(worst)};
}

Outcome fuzz() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> users(1, 60);
  std::uniform_real_distribution<double> radius(1.0, 40.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t feasible = 0;
  std::size_t unsound = 0;
  std::size_t failures = 0;
  std::size_t by_variant[3] = {0, 0, 0};
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::size_t u = users(rng);
    const double r = radius(rng);
    const double extent = 10.0 + 90.0 * unit(rng);
    const double c = unit(rng) < 0.3 ? kUnbounded : 10.0 + 290.0 * unit(rng);
    const std::size_t b_max = 1 + static_cast<std::size_t>(unit(rng) * 60.0);
    const std::uint64_t seed = rng();
    // LB is the slowest variant, so it gets a smaller share.
    const double pick = unit(rng);
    const Variant v = pick < 0.45 ? Variant::coverage : pick < 0.9 ? Variant::capacity
                                                                    : Variant::load_balance;
    ++by_variant[static_cast<int>(v)];
    try {
      const Scenario s = generate(u, extent, {5, 10}, seed, {r, c, b_max, Weighting::uniform});
      SolverConfig cfg;
      cfg.variant = v;
      cfg.seed = seed ^ 0x5bd1e995;
      cfg.cooling_rate = 0.8 + 0.15 * unit(rng);
      const SolveResult res = solve(s, cfg);
      bool finite = true;
      for (const TraceRecord& t : res.trace)
        finite = finite && std::isfinite(t.free_energy) && std::isfinite(t.temperature);
      for (const Vec2& x : res.plan.centers) finite = finite && std::isfinite(x.x) && std::isfinite(x.y);
      if (!finite) ++failures;
      if (res.feasible) {
        ++feasible;
        if (!check_feasibility(s, res.plan).feasible(cfg.enforces_capacity())) ++unsound;
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "solve " << i << ": " << e.what() << '\n';
    }
  }
  return {unsound == 0 && failures == 0,
          "1000 solves (cov " + std::to_string(by_variant[0]) + ", cap " +
              std::to_string(by_variant[1]) + ", lb " + std::to_string(by_variant[2]) + "), " +
              std::to_string(feasible) + " feasible, " + std::to_string(unsound) +
              " unsound, " + std::to_string(failures) + " exceptions or non-finite, " +
              fmt(seconds_since(t0), 1) + " s"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "beamforge_acceptance_sweep";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "spec.json");
    f << R"({"method": "da-cap", "u_values": [30, 60], "r_max_values": [8, 12],
             "c_max_values": ["inf", 150], "runs_per_cell": 3, "extent_km": 40})";
  }
  auto sweep = [&](const char* out) {
    const std::string cmd = std::string("\"") + BEAMFORGE_CLI + "\" sweep --spec " +
                            (dir / "spec.json").string() + " --out " + (dir / out).string() +
                            " > /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };
  const bool ran = sweep("a") && sweep("b");
  bool same = ran;
  std::size_t bytes = 0;
  for (const char* f : {"cells.csv", "runs.csv"}) {
    const std::string a = slurp(dir / "a" / f);
    same = same && !a.empty() && a == slurp(dir / "b" / f);
    bytes += a.size();
  }
  fs::remove_all(dir);
  return {same, ran ? "cells.csv and runs.csv, " + std::to_string(bytes) + " bytes compared"
                    : "sweep command failed"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::function<Outcome()> checks[] = {oracle_gap,          da_vs_cc,
                                             capacity_trend,      load_balance_effect,
                                             free_energy_descent, scalar_fixtures,
                                             fuzz,                cli_determinism};
  const char* names[] = {"oracle near-optimality", "DA-COV beats CC",   "capacity monotonicity",
                         "load balancing effect",  "free-energy descent", "scalar fixtures",
                         "feasibility soundness",  "sweep determinism"};
  bool all = true;
  for (int k = 1; k <= 8; ++k) {
    if (only != 0 && k != only) continue;
    Outcome o;
    try {
      o = checks[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %s: %s (%s)\n", k, names[k - 1], o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
