#include <random>

#include "beamforge/cc_baseline.hpp"
#include "beamforge/generator.hpp"
#include "beamforge/min_disk.hpp"
#include "beamforge/oracle.hpp"
#include "doctest.h"

using namespace beamforge;

namespace {

Scenario points(std::vector<Vec2> pos, double r) {
  std::vector<Terminal> t;
  for (std::size_t i = 0; i < pos.size(); ++i) t.push_back({"t" + std::to_string(i), pos[i], 5});
  return Scenario(std::move(t), {r, kUnbounded, 32, Weighting::uniform});
}

void check_cliques_fit(const Scenario& s, const BeamPlan& p) {
  std::vector<std::vector<Vec2>> members(p.beam_count());
  for (std::size_t u = 0; u < s.size(); ++u)
    members[p.assignment[u]].push_back(s.terminals()[u].position);
  for (const auto& m : members) {
    REQUIRE(!m.empty());
    CHECK(min_enclosing_disk(m).radius <= s.r_max() + 1e-9);
  }
}

}  // namespace

TEST_CASE("graph thresholds") {
  const auto exact = build_graph(points({{0, 0}, {2, 0}}, 1.0));
  CHECK(exact.adjacent(0, 1));
  CHECK(exact.adjacent(1, 0));
  CHECK(exact.edge_count() == 1);
  const auto apart = build_graph(points({{0, 0}, {2.01, 0}}, 1.0));
  CHECK(!apart.adjacent(0, 1));
  CHECK(apart.edge_count() == 0);
}

TEST_CASE("graph matches pairwise distances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = generate(5 + seed % 20, 20.0, {5, 10}, seed, {3.0, kUnbounded, 32});
    const auto g = build_graph(s);
    std::size_t edges = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(!g.adjacent(i, i));
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (i == j) continue;
        const bool want = distance(s.terminals()[i].position, s.terminals()[j].position) <= 6.0;
        CHECK(g.adjacent(i, j) == want);
        CHECK(g.adjacent(i, j) == g.adjacent(j, i));
        if (want && i < j) ++edges;
      }
    }
    CHECK(g.edge_count() == edges);
  }
}

TEST_CASE("cover examples") {
  const Scenario close = points({{0, 0}, {0.5, 0.2}, {0.1, 0.6}}, 1.0);
  CHECK(cc_cover(build_graph(close), close, 1).beam_count() == 1);
  const Scenario far = points({{0, 0}, {10, 0}}, 1.0);
  CHECK(cc_cover(build_graph(far), far, 1).beam_count() == 2);
  // Reuleaux-like triple: pairwise within 2r but no single disk of radius r.
  const double side = 1.95;
  const Scenario tri = points({{0, 0}, {side, 0}, {side / 2, side * std::sqrt(3.0) / 2}}, 1.0);
  const auto g = build_graph(tri);
  CHECK(g.edge_count() == 3);
  const BeamPlan p = cc_cover(g, tri, 1);
  CHECK(p.beam_count() == 2);
  CHECK(check_feasibility(tri, p).coverage_ok);
}

TEST_CASE("covers are always feasible") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scenario s = generate(100, 100.0, {5, 10}, seed, {6.0, kUnbounded, 100});
    const auto g = build_graph(s);
    const BeamPlan p = cc_cover(g, s, seed);
    CHECK(check_feasibility(s, p).coverage_ok);
    check_cliques_fit(s, p);
  }
}

TEST_CASE("best of") {
  const Scenario s = generate(60, 60.0, {5, 10}, 3, {6.0, kUnbounded, 60});
  const auto g = build_graph(s);
  CHECK_THROWS_AS((void)cc_best_of(s, 0, 1), BeamforgeError);
  const BeamPlan one = cc_best_of(s, 1, 9);
  const BeamPlan single = cc_cover(g, s, 9);
  CHECK(one.centers == single.centers);
  CHECK(one.assignment == single.assignment);

  const BeamPlan best = cc_best_of(s, 100, 9);
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(best.beam_count() <= cc_cover(g, s, 9 + i).beam_count());
  std::size_t prev = cc_best_of(s, 1, 9).beam_count();
  for (std::size_t n : {2, 5, 10, 25, 50}) {
    const std::size_t cur = cc_best_of(s, n, 9).beam_count();
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("best of 100 never beats the optimum on 8 points") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scenario s = generate(8, 6.0 * 2.0, {5, 10}, 500 + seed, {2.0, kUnbounded, 32});
    const std::size_t opt = exact_min_cover(s, false).beam_count();
    CHECK(cc_best_of(s, 100, seed).beam_count() >= opt);
  }
}

TEST_CASE("cover is a pure function of the seed") {
  const Scenario s = generate(50, 50.0, {5, 10}, 4, {5.0, kUnbounded, 50});
  const auto g = build_graph(s);
  const BeamPlan a = cc_cover(g, s, 17);
  const BeamPlan b = cc_cover(g, s, 17);
  CHECK(a.centers == b.centers);
  CHECK(a.assignment == b.assignment);
}
