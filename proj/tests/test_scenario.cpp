#include <cmath>
#include <numbers>
#include <random>

#include "beamforge/scenario.hpp"
#include "doctest.h"

using namespace beamforge;

namespace {

Scenario make(std::vector<Terminal> terminals, double r = 1.0, double c = kUnbounded) {
  return Scenario(std::move(terminals), {r, c, 32, Weighting::uniform});
}

}  // namespace

TEST_CASE("distortion examples") {
  CHECK(distortion({0, 0}, {0, 0}, 10, 45) == 0.0);
  CHECK(distortion({3, 4}, {0, 0}, 2, 1) == doctest::Approx(25.0).epsilon(1e-15));
  CHECK(distortion({1, 0}, {0, 0}, 10, 2) == doctest::Approx(9.765625e-4).epsilon(1e-15));
}

TEST_CASE("distortion is 1 on the boundary and increasing") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const double th = angle(rng);
    const double r = 1.0 + i;
    const Vec2 c{3.0, -2.0};
    const Vec2 u = c + Vec2{r * std::cos(th), r * std::sin(th)};
    CHECK(distortion(u, c, 10, r) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = -1.0;
    for (double t = 0.0; t <= 2.0; t += 0.05) {
      const double d = distortion(c + t * (u - c), c, 10, r);
      CHECK(d > prev);
      prev = d;
    }
  }
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(make({}), BeamforgeError);
  CHECK_THROWS_AS(make({{"a", {0, 0}, 5}, {"a", {1, 0}, 5}}), BeamforgeError);
  CHECK_THROWS_AS(make({{"a", {0, 0}, 0}}), BeamforgeError);
  CHECK_THROWS_AS(make({{"a", {0, 0}, -1}}), BeamforgeError);
  CHECK_THROWS_AS(make({{"a", {0, 0}, 5}}, 0.0), BeamforgeError);
  CHECK_THROWS_AS(make({{"a", {NAN, 0}, 5}}), BeamforgeError);
  CHECK_THROWS_AS(Scenario({{"a", {0, 0}, 5}}, {1, kUnbounded, 0, Weighting::uniform}),
                  BeamforgeError);
}

TEST_CASE("weights") {
  const std::vector<Terminal> t{{"a", {0, 0}, 5}, {"b", {1, 0}, 15}};
  const Scenario uni(t, {1, kUnbounded, 4, Weighting::uniform});
  CHECK(uni.weights()[0] == 0.5);
  CHECK(uni.weights()[1] == 0.5);
  const Scenario dem(t, {1, kUnbounded, 4, Weighting::demand});
  CHECK(dem.weights()[0] == doctest::Approx(0.25));
  CHECK(dem.weights()[1] == doctest::Approx(0.75));
  CHECK(uni.total_demand() == 20.0);
  CHECK(!uni.capacity_bounded());
}

TEST_CASE("feasibility examples") {
  SUBCASE("single terminal on its beam") {
    const Scenario s = make({{"a", {2, 2}, 5}}, 1.0, 10.0);
    const auto r = check_feasibility(s, make_plan(s, {{2, 2}}, {0}));
    CHECK(r.coverage_ok);
    CHECK(r.capacity_ok);
    CHECK(r.max_load == 5.0);
    CHECK(r.fractional_loads == std::vector<double>{1.0});
  }
  SUBCASE("just outside the boundary") {
    const Scenario s = make({{"a", {1.0001, 0}, 5}}, 1.0);
    const auto r = check_feasibility(s, make_plan(s, {{0, 0}}, {0}));
    CHECK(!r.coverage_ok);
    CHECK(r.uncovered == 1);
    CHECK(r.max_radius_used == doctest::Approx(1.0001));
  }
  SUBCASE("exactly on the boundary") {
    const Scenario s = make({{"a", {1.0, 0}, 5}}, 1.0);
    CHECK(check_feasibility(s, make_plan(s, {{0, 0}}, {0})).coverage_ok);
  }
  SUBCASE("co-located overload") {
    const Scenario s = make({{"a", {0, 0}, 5}, {"b", {0, 0}, 6}}, 1.0, 10.0);
    const auto r = check_feasibility(s, make_plan(s, {{0, 0}}, {0, 0}));
    CHECK(r.coverage_ok);
    CHECK(!r.capacity_ok);
    CHECK(r.max_load == 11.0);
    CHECK(r.overloaded_beams == 1);
    CHECK(!r.feasible(true));
    CHECK(r.feasible(false));
  }
  SUBCASE("is pure") {
    const Scenario s = make({{"a", {0, 0}, 5}, {"b", {3, 0}, 6}}, 2.0, 10.0);
    const BeamPlan p = make_plan(s, {{0, 0}, {2, 0}}, {0, 1});
    const auto a = check_feasibility(s, p);
    const auto b = check_feasibility(s, p);
    CHECK(a.coverage_ok == b.coverage_ok);
    CHECK(a.max_radius_used == b.max_radius_used);
    CHECK(a.fractional_loads == b.fractional_loads);
  }
}

TEST_CASE("plan bookkeeping") {
  const Scenario s = make({{"a", {0, 0}, 5}, {"b", {0, 0}, 10}, {"c", {5, 0}, 5}}, 1.0);
  CHECK_THROWS_AS((void)make_plan(s, {{0, 0}}, {0, 1, 0}), BeamforgeError);
  CHECK_THROWS_AS((void)make_plan(s, {{0, 0}}, {0, 0}), BeamforgeError);
  const BeamPlan p = make_plan(s, {{0, 0}, {9, 9}, {5, 0}}, {0, 0, 2});
  CHECK(p.per_beam_load == std::vector<double>{15, 0, 5});
  CHECK(p.per_beam_count == std::vector<std::size_t>{2, 0, 1});
  const BeamPlan c = compact_plan(s, p);
  CHECK(c.beam_count() == 2);
  CHECK(c.assignment == std::vector<std::size_t>{0, 0, 1});
  CHECK(c.centers[1] == Vec2{5, 0});

  SUBCASE("load profile") {
    const auto lp = load_profile(c, s);
    CHECK(lp[0] == doctest::Approx(0.75));
    CHECK(lp[1] == doctest::Approx(0.25));
    const Scenario one = make({{"a", {0, 0}, 5}});
    CHECK(load_profile(make_plan(one, {{0, 0}}, {0}), one) == std::vector<double>{1.0});
    const Scenario two = make({{"a", {0, 0}, 5}, {"b", {3, 0}, 5}});
    CHECK(load_profile(make_plan(two, {{0, 0}, {3, 0}}, {0, 1}), two) ==
          std::vector<double>{0.5, 0.5});
  }
}

TEST_CASE("stddev is the population form") {
  CHECK(stddev(std::vector<double>{}) == 0.0);
  CHECK(stddev(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9}) == doctest::Approx(2.0));
}

TEST_CASE("geodetic projection examples") {
  SUBCASE("single record") {
    GeoOrigin o;
    const auto t = project_geodetic(std::vector<GeoRecord>{{"a", 26.8, -85.4, 5}}, &o);
    CHECK(t[0].position == Vec2{0, 0});
    CHECK(o.lat0_deg == 26.8);
  }
  SUBCASE("coincident records") {
    const auto t = project_geodetic(
        std::vector<GeoRecord>{{"a", 26.0, -85.0, 5}, {"b", 26.0, -85.0, 5}});
    CHECK(t[0].position == Vec2{0, 0});
    CHECK(t[1].position == Vec2{0, 0});
  }
  SUBCASE("one degree of latitude") {
    const auto t = project_geodetic(
        std::vector<GeoRecord>{{"a", 26.0, -85.0, 5}, {"b", 27.0, -85.0, 5}});
    const long double expected = 6371.0L * 3.141592653589793238462643383279L / 180.0L;
    CHECK(t[1].position.y - t[0].position.y ==
          doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
    CHECK(std::abs(t[1].position.x - t[0].position.x) < 1e-12);
    CHECK(static_cast<double>(expected) == doctest::Approx(111.19).epsilon(1e-4));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS((void)project_geodetic(std::vector<GeoRecord>{}), BeamforgeError);
    CHECK_THROWS_AS((void)project_geodetic(std::vector<GeoRecord>{{"a", 91, 0, 5}}), BeamforgeError);
    CHECK_THROWS_AS((void)project_geodetic(std::vector<GeoRecord>{{"a", 0, -181, 5}}), BeamforgeError);
  }
}

namespace {

// Worst relative error of projected vs haversine distance over all pairs of a
// random square patch of side `extent_km` centered near (lat0, -85).
double worst_projection_error(double lat0, double extent_km, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  const double dlat = extent_km / (kEarthRadiusKm * std::numbers::pi / 180.0);
  const double dlon = dlat / std::cos(lat0 * std::numbers::pi / 180.0);
  std::vector<GeoRecord> recs;
  for (int i = 0; i < 60; ++i)
    recs.push_back({std::to_string(i), lat0 + dlat * unit(rng), -85.0 + dlon * unit(rng), 5});
  const auto t = project_geodetic(recs);
  double worst = 0.0;
  for (std::size_t i = 0; i < recs.size(); ++i)
    for (std::size_t j = i + 1; j < recs.size(); ++j) {
      const double h = haversine_km(recs[i].lat_deg, recs[i].lon_deg, recs[j].lat_deg,
                                    recs[j].lon_deg);
      if (h < 1.0) continue;
      worst = std::max(worst, std::abs(distance(t[i].position, t[j].position) - h) / h);
    }
  return worst;
}

}  // namespace

TEST_CASE("projection tracks haversine on regional patches") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    // Gulf latitudes, patches up to 150 km.
    CHECK(worst_projection_error(26.0, 150.0, seed) < 0.01);
    // 300 km patches near the equator.
    CHECK(worst_projection_error(5.0, 300.0, seed) < 0.01);
  }
}

TEST_CASE("projection error follows the meridian-scale bound") {
  // Pure east-west scale error at latitude offset h is about tan(lat0) h / R_E.
  for (double lat0 : {10.0, 26.0, 45.0}) {
    const double extent = 300.0;
    const double bound =
        std::tan(lat0 * std::numbers::pi / 180.0) * (extent / 2.0) / kEarthRadiusKm + 0.003;
    CHECK(worst_projection_error(lat0, extent, 11) < bound);
  }
}

TEST_CASE("unproject inverts project") {
  const std::vector<GeoRecord> recs{{"a", 26.1, -85.3, 5}, {"b", 27.2, -84.1, 5}};
  GeoOrigin o;
  const auto t = project_geodetic(recs, &o);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto [lat, lon] = unproject(t[i].position, o);
    CHECK(lat == doctest::Approx(recs[i].lat_deg).epsilon(1e-12));
    CHECK(lon == doctest::Approx(recs[i].lon_deg).epsilon(1e-12));
  }
}
