#include <doctest.h>

#include <cmath>

#include "corpus.hpp"
#include "pfaffinc/arcs.hpp"
#include "pfaffinc/errors.hpp"
#include "pfaffinc/intersect.hpp"

using namespace pfaffinc;

namespace {

// Plain bisection on a bracketing interval; independent of the library's arcs.
template <class F>
double bisect_root(F f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double trace_distance(const CurveTrace& tr, Vec2 q) {
  double best = 1e300;
  for (const auto& comp : tr.components)
    for (std::size_t i = 0; i + 1 < comp.size(); ++i) best = std::min(best, segment_distance(q, comp[i].p, comp[i + 1].p));
  return best;
}

}  // namespace

TEST_CASE("pfaffian_bezout_bound") {
  CHECK(pfaffian_bezout_bound(1, 1) == 8);
  CHECK(pfaffian_bezout_bound(0, 0) == 1);
  CHECK(pfaffian_bezout_bound(2, 3) == 38);
  CHECK_THROWS_AS(pfaffian_bezout_bound(-1, 0), InvalidArgument);
}

TEST_CASE("line meets exp twice") {
  const Rect vp{-4, 4, -4, 8};
  const auto pts = intersect_curves(catalog::line(1.0, 2.0), catalog::exp(), vp);
  REQUIRE(pts.size() == 2);
  const double r1 = bisect_root([](double x) { return std::exp(x) - x - 2; }, -3.0, 0.0);
  const double r2 = bisect_root([](double x) { return std::exp(x) - x - 2; }, 0.0, 3.0);
  CHECK(std::abs(r1 - -1.841406) < 1e-6);
  CHECK(std::abs(pts[0].x - r1) <= 1e-8);
  CHECK(std::abs(pts[1].x - r2) <= 1e-8);
}

TEST_CASE("two lines meet exactly once") {
  const auto pts = intersect_curves(catalog::line(1, 0), catalog::line(-1, 0), {-2, 2, -2, 2});
  REQUIRE(pts.size() == 1);
  CHECK(norm(pts[0]) <= 1e-9);
}

TEST_CASE("circle misses y = 2") {
  CHECK(intersect_curves(catalog::circle(0, 0, 1), catalog::line(0, 2), {-3, 3, -3, 3}).empty());
}

TEST_CASE("circle against lines and a tangent line") {
  const Rect vp{-3, 3, -3, 3};
  auto pts = intersect_curves(catalog::circle(0, 0, 1), catalog::line(0.0, 0.5), vp);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].x == doctest::Approx(-std::sqrt(0.75)).epsilon(1e-9));
  pts = intersect_curves(catalog::parabola(1, 0, 0), catalog::line(0, 0), vp);
  REQUIRE(pts.size() == 1);
  CHECK(norm(pts[0]) <= 1e-6);
}

TEST_CASE("tan x meets x once per period") {
  auto pts = intersect_curves(catalog::tan(1, 0, 0), catalog::line(1, 0), {-1.5, 1.5, -4, 4});
  CHECK(pts.size() == 1);
  CHECK(check_bezout(catalog::tan(1, 0, 0), catalog::line(1, 0), pts));
  pts = intersect_curves(catalog::tan(1, 0, 1), catalog::line(1, 0), {1.6, 4.7, -10, 10});
  REQUIRE(pts.size() == 1);
  const double oracle = bisect_root([](double x) { return std::tan(x) - x; }, 3.2, 4.7);
  CHECK(std::abs(pts[0].x - oracle) <= 1e-8);
}

TEST_CASE("check_bezout on small cases") {
  const auto l1 = catalog::line(1, 0), l2 = catalog::line(2, 1);
  CHECK(check_bezout(l1, l2, intersect_curves(l1, l2, {-3, 3, -3, 3})));
  const auto c = catalog::circle(0, 0, 1);
  const auto pts = intersect_curves(c, l1, {-3, 3, -3, 3});
  CHECK(pts.size() == 2);
  CHECK(check_bezout(c, l1, pts));
}

TEST_CASE("identical curves are reported as sharing a component") {
  CHECK_THROWS_AS(intersect_curves(catalog::line(1, 0), catalog::line(1, 0), {-2, 2, -2, 2}), SharedComponent);
}

TEST_CASE("corpus pairs respect the ceiling, are symmetric, and lie on both traces") {
  const auto corpus = testcorpus::catalog_corpus();
  const auto& vp = testcorpus::kViewport;
  std::vector<PreparedCurve> prepared;
  for (std::size_t i = 0; i < corpus.size(); ++i) prepared.push_back(prepare_curve(corpus[i], vp, 1e-3, int(i)));
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i + 1; j < corpus.size(); ++j) {
      const auto ab = intersect_curves(prepared[i], prepared[j]);
      const auto ba = intersect_curves(prepared[j], prepared[i]);
      CHECK(check_bezout(corpus[i], corpus[j], ab));
      REQUIRE(ab.size() == ba.size());
      for (std::size_t k = 0; k < ab.size(); ++k) CHECK(distance(ab[k], ba[k]) <= 1e-8);
      for (const Vec2 p : ab) {
        CHECK(closest_point(prepared[i], p, 1e-3).distance <= 1e-8);
        CHECK(closest_point(prepared[j], p, 1e-3).distance <= 1e-8);
        CHECK(trace_distance(prepared[i].trace, p) <= 1e-6);
      }
    }
}

TEST_CASE("vertical tangents") {
  const Rect vp{-3, 3, -3, 3};
  const auto circ = catalog::circle(0, 0, 1);
  auto pts = vertical_tangent_points(circ, trace_curve(circ, vp, 1e-3));
  REQUIRE(pts.size() == 2);
  CHECK(distance(pts[0], {-1, 0}) <= 1e-8);
  CHECK(distance(pts[1], {1, 0}) <= 1e-8);

  CHECK(vertical_tangent_points(catalog::line(2, 0), trace_curve(catalog::line(2, 0), vp, 1e-3)).empty());

  const auto ell = apply_linear_transform(circ, 2, 0, 0, 1);
  pts = vertical_tangent_points(ell, trace_curve(ell, vp, 1e-3));
  REQUIRE(pts.size() == 2);
  CHECK(std::abs(std::abs(pts[0].x) - 2.0) <= 1e-8);
  CHECK(std::abs(std::abs(pts[1].x) - 2.0) <= 1e-8);
  for (const Vec2 p : pts) CHECK(std::abs(ell.field().vx(p)) <= 1e-9);

  for (const auto& c : testcorpus::catalog_corpus()) {
    const auto vt = vertical_tangent_points(c, trace_curve(c, vp, 1e-3));
    CHECK(static_cast<std::int64_t>(vt.size()) <= pfaffian_bezout_bound(c.pf_degree(), c.pf_degree()));
    if (c.graph_form()) CHECK(vt.empty());
  }
}

TEST_CASE("monotone arcs of the circle") {
  const auto circ = catalog::circle(0, 0, 1, 0.4);
  const auto pc = prepare_curve(circ, {-3, 3, -3, 3}, 1e-3);
  REQUIRE(pc.arcs.size() == 2);
  for (const auto& a : pc.arcs) {
    CHECK(a.x0 == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(a.x1 == doctest::Approx(1.0).epsilon(1e-9));
    for (double x : {-0.9, -0.2, 0.5, 0.99}) CHECK(std::abs(std::abs(a.y_at(circ, x)) - std::sqrt(1 - x * x)) <= 1e-12);
  }
}
