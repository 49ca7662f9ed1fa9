#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "corpus.hpp"
#include "pfaffinc/errors.hpp"
#include "pfaffinc/incidence.hpp"
#include "pfaffinc/intersect.hpp"

using namespace pfaffinc;

namespace {

std::vector<PreparedCurve> prepare(const std::vector<PfaffianCurve>& cs, const Rect& vp) {
  std::vector<PreparedCurve> out;
  for (std::size_t i = 0; i < cs.size(); ++i) out.push_back(prepare_curve(cs[i], vp, 1e-3, static_cast<int>(i)));
  return out;
}

}  // namespace

TEST_CASE("count_incidences witness scene with thirteen incidences") {
  const Rect vp{-5.0, 5.0, -5.0, 5.0};
  const std::vector<Vec2> pts{{-1, 1}, {0, 0}, {1, 1}, {2, 4}};
  const auto cs = prepare({catalog::parabola(1.0, 0.0, 0.0), catalog::circle(0.0, 1.0, 1.0),
                           catalog::circle(-3.0, 4.0, 5.0), catalog::line(0.0, 1.0), catalog::line(0.0, 4.0)},
                          vp);
  const auto g = count_incidences(pts, cs);
  CHECK(g.size() == 13);
  CHECK(g.m == 4);
  CHECK(g.n == 5);
  CHECK(count_incidences(std::span<const Vec2>{}, cs).size() == 0);
  CHECK_THROWS_AS(count_incidences(pts, cs, 0.0), InvalidArgument);
}

TEST_CASE("count_incidences grid with three lines per point") {
  // Points (i, j), i < 5, j < 4, each on y = j, y = x + (j - i), y = -x + (i + j).
  const Rect vp{-1.0, 5.0, -1.0, 4.0};
  std::vector<Vec2> pts;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j) pts.push_back({double(i), double(j)});
  std::vector<PfaffianCurve> lines;
  for (int j = 0; j < 4; ++j) lines.push_back(catalog::line(0.0, j));
  for (int c = -4; c <= 3; ++c) lines.push_back(catalog::line(1.0, c));
  for (int c = 0; c <= 7; ++c) lines.push_back(catalog::line(-1.0, c));
  const auto g = count_incidences(pts, prepare(lines, vp));
  CHECK(g.size() == 60);
  CHECK(kst_free(g, 2, 2));
}

TEST_CASE("kst_free") {
  SUBCASE("duplicate curve") {
    const Rect vp{-3, 3, -3, 3};
    const auto cs = prepare({catalog::line(1.0, 0.0), catalog::line(1.0, 0.0), catalog::line(-1.0, 1.0)}, vp);
    const std::vector<Vec2> pts{{0, 0}, {1, 1}, {0, 1}};
    const auto g = count_incidences(pts, cs);
    CHECK_FALSE(kst_free(g, 2, 2));
    CHECK(kst_free(g, 3, 2));
    CHECK_FALSE(kst_free(g.transposed(), 2, 2));
  }
  SUBCASE("unit circles avoid K32") {
    std::vector<PfaffianCurve> cs;
    std::vector<Vec2> centers;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) centers.push_back({0.7 * i + 0.1 * j, 0.8 * j + 0.05 * i * i});
    for (auto c : centers) cs.push_back(catalog::circle(c.x, c.y, 1.0));
    // Intersection points of every pair of circles, from the chord construction.
    std::vector<Vec2> pts;
    for (std::size_t a = 0; a < centers.size(); ++a)
      for (std::size_t b = a + 1; b < centers.size(); ++b) {
        const Vec2 d = centers[b] - centers[a];
        const double L = norm(d);
        if (L >= 2.0) continue;
        const double h = std::sqrt(1.0 - L * L / 4.0);
        const Vec2 mid = centers[a] + 0.5 * d, perp{-d.y / L, d.x / L};
        pts.push_back(mid + h * perp);
        pts.push_back(mid - h * perp);
      }
    const auto g = count_incidences(pts, prepare(cs, {-2, 4, -2, 4}));
    CHECK(g.size() >= 2 * pts.size());
    CHECK(kst_free(g, 3, 2));
    CHECK(kst_free(g.transposed(), 2, 3));
  }
  SUBCASE("complete graph") {
    IncidenceGraph g{5, 3, {}};
    for (int p = 0; p < 5; ++p)
      for (int c = 0; c < 3; ++c) g.edges.emplace_back(p, c);
    CHECK_FALSE(kst_free(g, 5, 3));
    CHECK(kst_free(g, 6, 1));
    CHECK(kst_free(g, 1, 4));
  }
  SUBCASE("complexity guard") {
    IncidenceGraph g{400, 400, {}};
    CHECK_THROWS_AS(kst_free(g, 4, 4), ComplexityGuard);
  }
}

TEST_CASE("catalog corpus avoids K92") {
  const auto cs = prepare(testcorpus::catalog_corpus(), testcorpus::kViewport);
  std::vector<Vec2> pts;
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a + 1; b < cs.size(); ++b)
      for (const Vec2 p : intersect_curves(cs[a], cs[b])) pts.push_back(p);
  REQUIRE(pts.size() > 20);
  const auto g = count_incidences(pts, cs);
  CHECK(kst_free(g, 9, 2));
}

TEST_CASE("count_via_cutting matches brute force") {
  const Rect vp{-2, 2, -2, 2};
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> slope(-2, 2), icpt(-1, 1), ux(-1.9, 1.9);
  std::vector<double> a(50), b(50);
  std::vector<PfaffianCurve> lines;
  for (int i = 0; i < 50; ++i) {
    a[i] = slope(rng);
    b[i] = icpt(rng);
    lines.push_back(catalog::line(a[i], b[i]));
  }
  std::vector<Vec2> pts;
  std::uniform_int_distribution<int> pick(0, 49);
  while (pts.size() < 200) {
    if (pts.size() % 2 == 0) {
      const int i = pick(rng);
      const double x = ux(rng), y = a[i] * x + b[i];
      if (std::abs(y) < 2.0) pts.push_back({x, y});
    } else {
      pts.push_back({ux(rng), ux(rng)});
    }
  }
  auto cs = std::make_shared<const std::vector<PreparedCurve>>(prepare(lines, vp));
  const auto cut = build_cutting(cs, 4, 9);
  const auto brute = count_incidences(pts, *cs);
  const auto br = count_via_cutting(pts, *cs, cut);
  CHECK(br.total == static_cast<std::int64_t>(brute.size()));
  CHECK(br.total == br.per_cell_sum() + br.on_boundary_vs_nonsample + br.on_boundary_vs_sample);
  CHECK(br.per_cell.size() == cut.cells.size());

  SUBCASE("points on sampled curves only") {
    std::vector<Vec2> on;
    for (int id : cut.sample)
      for (double x : {-0.5, 0.25}) {
        const double y = a[id] * x + b[id];
        if (std::abs(y) < 2.0) on.push_back({x, y});
      }
    const auto r = count_via_cutting(on, *cs, cut);
    CHECK(r.per_cell_sum() == 0);
    CHECK(r.on_boundary_vs_sample >= static_cast<std::int64_t>(on.size()));
    CHECK(r.total == static_cast<std::int64_t>(count_incidences(on, *cs).size()));
  }
  SUBCASE("inconsistent curve set") {
    const std::vector<PreparedCurve> fewer(cs->begin(), cs->begin() + 10);
    CHECK_THROWS_AS(count_via_cutting(pts, fewer, cut), InconsistentScene);
    const std::vector<Vec2> outside{{5.0, 0.0}};
    CHECK_THROWS_AS(count_via_cutting(outside, *cs, cut), InconsistentScene);
  }
}

TEST_CASE("single-cell cutting puts everything in the cell") {
  const Rect vp{-2, 2, -2, 2};
  auto cs = std::make_shared<const std::vector<PreparedCurve>>(
      prepare({catalog::line(1, 0), catalog::line(-1, 0.5), catalog::line(0.2, -0.3)}, vp));
  auto cut = build_cells(cs, {}, {}, vp);
  compute_crossings(cut);
  const std::vector<Vec2> pts{{0.5, 0.5}, {1.0, -0.5}, {0.1, 0.1}};
  const auto br = count_via_cutting(pts, *cs, cut);
  CHECK(br.per_cell.size() == 1);
  CHECK(br.per_cell[0] == static_cast<std::int64_t>(count_incidences(pts, *cs).size()));
  CHECK(br.per_cell[0] == 3);
}

TEST_CASE("bound evaluators") {
  CHECK(bound_kst(100, 100, 2) == doctest::Approx(1100.0));
  CHECK(bound_kst(0, 37, 3, 2.0) == doctest::Approx(74.0));
  CHECK(bound_kst(100, 64, 3) == doctest::Approx(1664.0));
  CHECK(bound_kst_dual(100, 64, 2) == doctest::Approx(10.0 * 64 + 100));
  CHECK(bound_pach_sharir(1, 1, 2, 1.5) == doctest::Approx(4.5));
  CHECK(bound_pach_sharir(1e6, 1e3, 2) == doctest::Approx(2.001e6));
  CHECK(bound_pach_sharir(27, 8, 2) == doctest::Approx(9.0 * 4.0 + 27 + 8));

  const double L = std::log(100.0);
  CHECK(bound_pfaffian_curves(0, 100, 2) == doctest::Approx(100 * L * L));
  CHECK(bound_pfaffian_curves(1000, 100, 2) ==
        doctest::Approx(100.0 * std::pow(100.0, 2.0 / 3) * std::pow(L, 2.0 / 3) + 100 * L * L + 1000));
  CHECK_THROWS_AS(bound_pfaffian_curves(10, 1, 2), InvalidArgument);

  CHECK(bound_pfaffian_family(1, 1, 3, 0.0) == doctest::Approx(3.0));
  CHECK(bound_pfaffian_family(8, 27, 3, 0.0) == doctest::Approx(9.0 * 4.0 + 8 + 27));
  CHECK(bound_pfaffian_family(64, 8, 4, 0.0) == doctest::Approx(std::pow(8.0, 0.8) * std::pow(64.0, 0.6) + 72));
  CHECK(bound_hyperplanes(0, 50, 3, 2, 0.1) == doctest::Approx(50.0));
  CHECK(bound_hyperplanes(27, 8, 2, 2, 0.0) == doctest::Approx(bound_pach_sharir(27, 8, 2)));
  CHECK(bound_hyperplanes(32, 243, 3, 2, 0.0) == doctest::Approx(std::pow(32.0, 0.8) * std::pow(243.0, 0.6) + 275));
}

TEST_CASE("bound evaluators are monotone") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(2.0, 1e5), f(1.0, 3.0);
  std::uniform_int_distribution<int> si(2, 5);
  for (int i = 0; i < 2000; ++i) {
    const double m = u(rng), n = u(rng), k = f(rng);
    const int s = si(rng), d = si(rng);
    CHECK(bound_kst(m * k, n, s) >= bound_kst(m, n, s));
    CHECK(bound_kst(m, n * k, s) >= bound_kst(m, n, s));
    CHECK(bound_kst_dual(m * k, n, s) >= bound_kst_dual(m, n, s));
    CHECK(bound_kst_dual(m, n * k, s) >= bound_kst_dual(m, n, s));
    CHECK(bound_pach_sharir(m * k, n, s) >= bound_pach_sharir(m, n, s));
    CHECK(bound_pach_sharir(m, n * k, s) >= bound_pach_sharir(m, n, s));
    CHECK(bound_pfaffian_curves(m * k, n, s) >= bound_pfaffian_curves(m, n, s));
    CHECK(bound_pfaffian_curves(m, n * k, s) >= bound_pfaffian_curves(m, n, s));
    CHECK(bound_pfaffian_family(m * k, n, d, 0.01) >= bound_pfaffian_family(m, n, d, 0.01));
    CHECK(bound_pfaffian_family(m, n * k, d, 0.01) >= bound_pfaffian_family(m, n, d, 0.01));
    CHECK(bound_hyperplanes(m * k, n, d, s, 0.01) >= bound_hyperplanes(m, n, d, s, 0.01));
    CHECK(bound_hyperplanes(m, n * k, d, s, 0.01) >= bound_hyperplanes(m, n, d, s, 0.01));
  }
}

TEST_CASE("optimal_r") {
  // 10^{8/3} / (10^{2/3} (ln 100)^{4/3}) = 100 / (ln 100)^{4/3} = 13.05...
  const auto r = optimal_r(1e4, 1e2, 2);
  CHECK(r.raw == doctest::Approx(100.0 / std::pow(std::log(100.0), 4.0 / 3.0)));
  CHECK(r.r == 13);
  CHECK(r.regime == Regime::Balanced);

  const auto few = optimal_r(3, 1000, 2);
  CHECK(few.r == 1);
  CHECK(few.regime == Regime::FewPoints);
  CHECK(to_string(few.regime) == "few-points regime");

  const auto many = optimal_r(1e12, 10, 2);
  CHECK(many.r == 9);
  CHECK(many.regime == Regime::FewCurves);
  CHECK(to_string(many.regime) == "n<√m regime");
}

TEST_CASE("fit_constant") {
  const std::vector<double> counts{10, 30, 5}, unit{20, 10, 50};
  CHECK(fit_constant(counts, unit) == doctest::Approx(3.0));
}
