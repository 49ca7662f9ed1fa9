#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <set>

#include "pfaffinc/cutting.hpp"
#include "pfaffinc/errors.hpp"

using namespace pfaffinc;

namespace {

using Curves = std::shared_ptr<const std::vector<PreparedCurve>>;

Curves prepare(const std::vector<PfaffianCurve>& cs, const Rect& vp, double step = 1e-3) {
  auto out = std::make_shared<std::vector<PreparedCurve>>();
  for (std::size_t i = 0; i < cs.size(); ++i) out->push_back(prepare_curve(cs[i], vp, step, static_cast<int>(i)));
  return out;
}

Cutting cells_of(const Curves& curves, std::vector<int> sample, const Rect& vp) {
  auto rays = build_rays(*curves, sample, vp);
  return build_cells(curves, std::move(sample), std::move(rays), vp);
}

struct LineCoef {
  double a, b;
};

std::vector<LineCoef> random_lines(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> slope(-2.0, 2.0), icpt(-1.0, 1.0);
  std::vector<LineCoef> out;
  for (int i = 0; i < n; ++i) out.push_back({slope(rng), icpt(rng)});
  return out;
}

std::vector<PfaffianCurve> as_curves(const std::vector<LineCoef>& ls) {
  std::vector<PfaffianCurve> out;
  for (const auto& l : ls) out.push_back(catalog::line(l.a, l.b));
  return out;
}

// Cell membership computed from the line coefficients, not from the library's arcs.
struct CellOracle {
  const std::vector<LineCoef>& lines;
  const Cutting& cut;

  double lower(const PfCell& c, double x) const {
    return c.bottom_arc ? lines[c.bottom_arc->curve].a * x + lines[c.bottom_arc->curve].b : cut.viewport.ymin;
  }
  double upper(const PfCell& c, double x) const {
    return c.top_arc ? lines[c.top_arc->curve].a * x + lines[c.top_arc->curve].b : cut.viewport.ymax;
  }
  double xl(const PfCell& c) const { return cut.xs[c.first_slab]; }
  double xr(const PfCell& c) const { return cut.xs[c.last_slab + 1]; }
  bool interior(const PfCell& c, Vec2 p, double eps) const {
    return p.x > xl(c) + eps && p.x < xr(c) - eps && p.y > lower(c, p.x) + eps && p.y < upper(c, p.x) - eps;
  }
};

const Rect kBox{-2.0, 2.0, -2.0, 2.0};

}  // namespace

TEST_CASE("sample_curves") {
  const auto a = sample_curves(10, 10, 7);
  CHECK(a.size() <= 10);
  CHECK(a == sample_curves(10, 10, 7));
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(sample_curves(10, 1, 3).size() == 1);
  CHECK_THROWS_AS(sample_curves(10, 0, 3), InvalidArgument);

  // E|S| = n (1 - (1 - 1/n)^s).
  const double expected = 100.0 * (1.0 - std::pow(0.99, 200.0));
  CHECK(expected == doctest::Approx(86.6).epsilon(0.001));
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) sum += static_cast<double>(sample_curves(100, 200, seed).size());
  CHECK(std::abs(sum / 1000.0 - expected) <= 2.0);
}

TEST_CASE("sample_size uses the natural log") {
  CHECK(sample_size(2, 1) == 4);
  CHECK(sample_size(100, 2) == static_cast<int>(std::ceil(10.0 * std::log(100.0))));
}

TEST_CASE("rays") {
  SUBCASE("two crossing lines") {
    auto cs = prepare({catalog::line(1.0, 0.0), catalog::line(-1.0, 0.0)}, kBox);
    const auto rays = build_rays(*cs, {0, 1}, kBox);
    REQUIRE(rays.size() == 2);
    for (const auto& r : rays) {
      CHECK(r.origin.x == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(r.stopped_by == -1);
      CHECK(r.y_end == (r.up ? 2.0 : -2.0));
    }
  }
  SUBCASE("unit circle") {
    auto cs = prepare({catalog::circle(0.0, 0.0, 1.0)}, kBox);
    const auto rays = build_rays(*cs, {0}, kBox);
    REQUIRE(rays.size() == 4);
    std::set<int> xs;
    for (const auto& r : rays) {
      CHECK(std::abs(std::abs(r.origin.x) - 1.0) < 1e-9);
      CHECK(std::abs(r.origin.y) < 1e-6);
      xs.insert(r.origin.x > 0 ? 1 : -1);
    }
    CHECK(xs.size() == 2);
  }
  SUBCASE("parabola touching a line") {
    auto cs = prepare({catalog::parabola(1.0, 0.0, 0.0), catalog::line(0.0, 0.0)}, kBox);
    const auto rays = build_rays(*cs, {0, 1}, kBox);
    CHECK(rays.size() == 2);
  }
  SUBCASE("a ray stops at the next sample curve") {
    auto cs = prepare({catalog::line(1.0, 0.0), catalog::line(-1.0, 0.0), catalog::line(0.0, 1.0)}, kBox);
    const auto rays = build_rays(*cs, {0, 1, 2}, kBox);
    // Three crossings: (0,0), (1,1), (-1,1).
    CHECK(rays.size() == 6);
    for (const auto& r : rays)
      if (r.up && std::abs(r.origin.x) < 1e-9) {
        CHECK(r.stopped_by == 2);
        CHECK(r.y_end == doctest::Approx(1.0));
      }
  }
}

TEST_CASE("build_cells small arrangements") {
  SUBCASE("empty sample") {
    auto cs = prepare({catalog::line(0.3, 0.1)}, kBox);
    const auto c = cells_of(cs, {}, kBox);
    CHECK(c.cells.size() == 1);
    CHECK(c.cells[0].corner_count == 0);
    CHECK(total_cell_area(c) == doctest::Approx(16.0).epsilon(1e-12));
  }
  SUBCASE("one horizontal line") {
    auto cs = prepare({catalog::line(0.0, 0.5)}, kBox);
    const auto c = cells_of(cs, {0}, kBox);
    REQUIRE(c.cells.size() == 2);
    CHECK(c.cells[0].area == doctest::Approx(10.0));
    CHECK(c.cells[1].area == doctest::Approx(6.0));
  }
  SUBCASE("two crossing lines") {
    auto cs = prepare({catalog::line(1.0, 0.0), catalog::line(-1.0, 0.0)}, kBox);
    const auto c = cells_of(cs, {0, 1}, kBox);
    CHECK(c.cells.size() == 6);
    for (const auto& cell : c.cells) {
      CHECK(cell.corner_count <= 4);
      if (cell.left) CHECK(cell.left->yhi > cell.left->ylo);
    }
    CHECK(total_cell_area(c) == doctest::Approx(16.0).epsilon(1e-9));
  }
  SUBCASE("unit circle") {
    auto cs = prepare({catalog::circle(0.0, 0.0, 1.0)}, kBox);
    const auto c = cells_of(cs, {0}, kBox);
    // Left strip, right strip, inside, above, below.
    CHECK(c.cells.size() == 5);
    CHECK(total_cell_area(c) == doctest::Approx(16.0).epsilon(1e-6));
    const auto in = locate_point(c, {0.0, 0.0});
    REQUIRE_FALSE(in.boundary);
    CHECK(c.cells[in.cell()].area == doctest::Approx(M_PI).epsilon(1e-6));
  }
}

TEST_CASE("cell crossings agree with dense sampling on random lines") {
  const auto lines = random_lines(20, 11);
  auto cs = prepare(as_curves(lines), kBox);
  auto c = cells_of(cs, {0, 3, 7, 12, 18}, kBox);
  compute_crossings(c);
  const CellOracle oracle{lines, c};
  REQUIRE(c.cells.size() >= 10);
  for (int k = 0; k < 10; ++k) {
    const PfCell& cell = c.cells[(k * 7) % c.cells.size()];
    std::set<int> seen;
    for (int id = 0; id < 20; ++id) {
      if (c.in_sample[id]) continue;
      const double x0 = oracle.xl(cell), x1 = oracle.xr(cell);
      for (int i = 1; i < 200000; ++i) {
        const double x = x0 + (x1 - x0) * i / 200000.0;
        if (oracle.interior(cell, {x, lines[id].a * x + lines[id].b}, 1e-9)) {
          seen.insert(id);
          break;
        }
      }
    }
    const std::set<int> got(c.crossing_curves[cell.id].begin(), c.crossing_curves[cell.id].end());
    CHECK(got == seen);
    CHECK(cell_crossings(c, cell.id) == seen.size());
  }
}

TEST_CASE("whole-viewport cell is crossed by every visible curve") {
  const auto lines = random_lines(8, 5);
  auto cs = prepare(as_curves(lines), kBox);
  auto c = cells_of(cs, {}, kBox);
  compute_crossings(c);
  CHECK(cell_crossings(c, 0) == 8);
}

TEST_CASE("locate_point") {
  const auto lines = random_lines(20, 23);
  auto cs = prepare(as_curves(lines), kBox);
  auto c = cells_of(cs, {1, 4, 9, 16}, kBox);
  const CellOracle oracle{lines, c};

  SUBCASE("matches a linear scan over cells") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int interior = 0;
    for (int i = 0; i < 1000; ++i) {
      const Vec2 p{u(rng), u(rng)};
      std::vector<int> hits;
      for (const auto& cell : c.cells)
        if (oracle.interior(cell, p, 0.0)) hits.push_back(cell.id);
      const auto loc = locate_point(c, p);
      if (loc.boundary) {
        CHECK(loc.cells.size() >= 2);
        continue;
      }
      ++interior;
      REQUIRE(hits.size() == 1);
      CHECK(loc.cell() == hits[0]);
    }
    CHECK(interior > 900);
  }
  SUBCASE("points on a sample line are boundary points with two cells") {
    for (double x : {-1.3, -0.2, 0.4, 1.7}) {
      const auto& l = lines[9];
      const double y = l.a * x + l.b;
      if (std::abs(y) >= 2.0) continue;
      const auto loc = locate_point(c, {x, y});
      CHECK(loc.boundary);
      CHECK(loc.cells.size() >= 2);
    }
  }
  SUBCASE("single cell") {
    auto e = cells_of(cs, {}, kBox);
    const auto loc = locate_point(e, {0.1, 0.2});
    CHECK_FALSE(loc.boundary);
    CHECK(loc.cell() == 0);
  }
}

TEST_CASE("partition and area on a mixed scene") {
  const Rect vp{-3.0, 3.0, -3.0, 3.0};
  auto cs = prepare({catalog::circle(0.0, 0.0, 1.0), catalog::parabola(1.0, 0.0, -1.0), catalog::exp(),
                     catalog::line(0.5, 0.2), catalog::circle(1.0, 0.5, 1.5)},
                    vp);
  auto c = cells_of(cs, {0, 1, 2, 3, 4}, vp);
  CHECK(std::abs(total_cell_area(c) - vp.area()) <= 1e-6 * vp.area());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const auto loc = locate_point(c, {u(rng), u(rng)});
    if (loc.boundary)
      CHECK(loc.cells.size() >= 2);
    else
      CHECK(loc.cells.size() == 1);
  }
  for (const auto& cell : c.cells) CHECK(cell.corner_count <= 4);
  CHECK(c.rays.size() <= 2 * (sample_events(*cs, c.sample, 1e-9).size()));
}

TEST_CASE("build_cutting") {
  SUBCASE("fifty random lines, r = 2") {
    const auto lines = random_lines(50, 3);
    auto cs = prepare(as_curves(lines), kBox);
    const auto c = build_cutting(cs, 2, 17);
    CHECK(c.s == sample_size(50, 2));
    CHECK(c.max_crossings() * 2 <= 50);
    CHECK(c.retries_used <= 3);
    CHECK(cutting_to_json(c) == cutting_to_json(build_cutting(cs, 2, 17)));
  }
  SUBCASE("r = n - 1 samples everything") {
    const auto lines = random_lines(6, 8);
    auto cs = prepare(as_curves(lines), kBox);
    const auto c = build_cutting(cs, 5, 1);
    CHECK(c.sample.size() == 6);
    CHECK(c.max_crossings() == 0);
  }
  SUBCASE("n = 2, r = 1") {
    auto cs = prepare({catalog::line(1.0, 0.0), catalog::line(-1.0, 0.5)}, kBox);
    const auto c = build_cutting(cs, 1, 5);
    CHECK(c.s == 4);
    CHECK(c.retries_used == 0);
  }
  SUBCASE("bad r") {
    auto cs = prepare({catalog::line(1.0, 0.0), catalog::line(-1.0, 0.5)}, kBox);
    CHECK_THROWS_AS(build_cutting(cs, 2, 5), InvalidArgument);
    CHECK_THROWS_AS(build_cutting(cs, 0, 5), InvalidArgument);
  }
}

TEST_CASE("cutting serialization") {
  auto cs = prepare({catalog::line(1.0, 0.0), catalog::line(-1.0, 0.0)}, kBox);
  auto c = cells_of(cs, {0, 1}, kBox);
  compute_crossings(c);
  const auto j = cutting_to_json(c);
  CHECK(j.find("\"cells\"") != std::string::npos);
  CHECK(cutting_crossings_csv(c).rfind("cell,crossings,corners,area\n", 0) == 0);
  CHECK(cutting_to_svg(c).find("<svg") == 0);
}
