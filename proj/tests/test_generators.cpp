#include <doctest.h>

#include <cmath>

#include "pfaffinc/errors.hpp"
#include "pfaffinc/generators.hpp"
#include "pfaffinc/incidence.hpp"

using namespace pfaffinc;

namespace {

// Integer incidence count of grid_lines(a, b), independent of the curve code.
long long grid_oracle(int a, int b) {
  long long count = 0;
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < 2 * a * b; ++y)
      for (int s = 0; s < b; ++s)
        for (int t = 0; t < a * b; ++t)
          if (y == s * x + t) ++count;
  return count;
}

}  // namespace

TEST_CASE("grid_lines") {
  SUBCASE("minimal") {
    const auto s = grid_lines(1, 1);
    CHECK(s.points.size() == 2);
    CHECK(s.curves.size() == 1);
    CHECK(count_incidences(s).size() == 1);
  }
  SUBCASE("a = b = 2") {
    const auto s = grid_lines(2, 2);
    CHECK(s.points.size() == 16);
    CHECK(s.curves.size() == 8);
    const auto g = count_incidences(s);
    CHECK(static_cast<long long>(g.size()) == grid_oracle(2, 2));
    CHECK(g.size() == 16);
    CHECK(g.size() >= 8);
    CHECK(kst_free(g, 2, 2));
  }
  SUBCASE("doubling a and b") {
    const auto small = count_incidences(grid_lines(2, 2)).size();
    const auto big = count_incidences(grid_lines(4, 4)).size();
    CHECK(static_cast<long long>(big) == grid_oracle(4, 4));
    // Every line meets a points, so I = a^2 b^2 and doubling both multiplies I by 16.
    CHECK(big == 16 * small);
    CHECK(big >= 4u * 4u * 4u);
  }
  CHECK_THROWS_AS(grid_lines(0, 3), InvalidArgument);
}

TEST_CASE("exp_transform") {
  Scene s;
  s.viewport = {-1, 1, 0, 10};
  s.points = {{0, 5}};
  s.curves = {catalog::line(2, 5)};
  const auto t = exp_transform(s);
  CHECK(t.points[0].x == 1.0);
  CHECK(t.points[0].y == 5.0);
  CHECK(t.curves[0].kind() == CurveKind::Log);
  CHECK(t.viewport.xmin == doctest::Approx(std::exp(-1.0)));
  CHECK(t.viewport.xmax == doctest::Approx(std::exp(1.0)));
  CHECK(count_incidences(t).size() == 1);

  const auto g = grid_lines(3, 3);
  CHECK(count_incidences(exp_transform(g)).size() == count_incidences(g).size());

  const auto e = exp_transform(Scene{});
  CHECK(e.points.empty());
  CHECK(e.curves.empty());

  Scene bad;
  bad.curves = {catalog::circle(0, 0, 1)};
  CHECK_THROWS_AS(exp_transform(bad), InvalidArgument);
}

TEST_CASE("unit_circles") {
  const auto tangent = unit_circle_intersections({0, 0}, {2, 0});
  REQUIRE(tangent.size() == 1);
  CHECK(tangent[0] == Vec2{1, 0});
  CHECK(unit_circle_intersections({0, 0}, {1, 0}).size() == 2);
  CHECK(unit_circle_intersections({0, 0}, {3, 0}).empty());

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = unit_circles(60, 20, seed);
    CHECK(s.points.size() == 60);
    CHECK(s.curves.size() == 20);
    const auto g = count_incidences(s);
    CHECK(g.size() >= 60);  // 30 planted points, two circles each
    CHECK(kst_free(g, 2, 3));
  }
  CHECK(count_incidences(unit_circles(0, 10, 1)).size() == 0);
}

TEST_CASE("random_scene") {
  const auto kinds = default_random_kinds();
  SUBCASE("nothing planted") {
    const auto s = random_scene(kinds, 100, 20, 0.0, 4);
    CHECK(count_incidences(s).size() <= 1);
  }
  SUBCASE("everything planted") {
    const auto s = random_scene(kinds, 100, 20, 1.0, 4);
    const auto g = count_incidences(s);
    CHECK(g.size() >= 100);
    std::vector<int> deg(100, 0);
    for (const auto& [p, c] : g.edges) ++deg[p];
    CHECK(std::count(deg.begin(), deg.end(), 0) == 0);
  }
  SUBCASE("determinism") {
    CHECK(scene_to_json(random_scene(kinds, 50, 30, 0.5, 9)) == scene_to_json(random_scene(kinds, 50, 30, 0.5, 9)));
    CHECK(scene_to_json(random_scene(kinds, 50, 30, 0.5, 9)) != scene_to_json(random_scene(kinds, 50, 30, 0.5, 10)));
  }
  SUBCASE("all curves visible and distinct") {
    const auto s = random_scene(kinds, 0, 60, 0.5, 2);
    for (const auto& pc : prepare_scene(s)) CHECK_FALSE(pc.trace.empty());
  }
  CHECK_THROWS_AS(random_scene(kinds, 10, 10, 1.5, 1), InvalidArgument);
}

TEST_CASE("random_family_scene") {
  const auto f = families::lines({-2, 2, -2, 2});
  const auto s = random_family_scene(f, 50, 40, 6);
  CHECK(s.points.size() == 50);
  CHECK(s.curves.size() == 40);
  CHECK_NOTHROW(check_distinct(s.curves));
  for (const Vec2 p : s.points) CHECK(f.domain.contains(p));
  CHECK(family_scene_to_json(s) == family_scene_to_json(random_family_scene(f, 50, 40, 6)));
}
