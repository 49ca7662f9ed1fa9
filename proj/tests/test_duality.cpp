#include <doctest.h>

#include <cmath>
#include <random>

#include "pfaffinc/duality.hpp"
#include "pfaffinc/errors.hpp"
#include "pfaffinc/generators.hpp"

using namespace pfaffinc;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const Rect kU{-2.0, 2.0, -2.0, 2.0};

}  // namespace

TEST_CASE("family terms") {
  const auto f = families::exp_lines(kU);
  CHECK(f.dimension() == 4);
  const auto m = f.eval({0.5, -1.0});
  CHECK(m[0] == 1.0);
  CHECK(m[1] == 0.5);
  CHECK(m[2] == -1.0);
  CHECK(m[3] == doctest::Approx(std::exp(0.5)));
  CHECK(FamilyTerm::monomial(2, 1).to_string() == "x^2*y");
  CHECK(FamilyTerm::monomial(0, 0).to_string() == "1");
  CHECK_THROWS_AS(make_family({FamilyTerm::monomial(0, 0)}, kU), InvalidArgument);
  CHECK_THROWS_AS(families::lines(Rect{0, 1, 0, INFINITY}), InvalidArgument);
  CHECK_THROWS_AS(families::log_graphs(kU), InvalidArgument);
}

TEST_CASE("dual_point") {
  const auto c = make_family_curve(vec({0, 1, -1}));
  const auto z = dual_point(c);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(z[2] == doctest::Approx(-1.0 / std::sqrt(2.0)));

  const auto unit = vec({0.6, 0.0, -0.8});
  CHECK(dual_point(make_family_curve(unit)) == unit);
  CHECK(dual_point(make_family_curve(-unit)) == unit);

  const std::vector<FamilyCurve> prop{make_family_curve(vec({1, 2, 3})), make_family_curve(vec({-2, -4, -6}))};
  CHECK_THROWS_AS(check_distinct(prop), DuplicateCurve);
  CHECK_THROWS_AS(make_family_curve(vec({0, 0, 0})), InvalidArgument);
}

TEST_CASE("dual_hyperplane") {
  const auto f = families::lines(kU);
  CHECK(dual_hyperplane(f, {1, 2}).normal == vec({1, 1, 2}));
  CHECK(dual_hyperplane(f, {0, 0}).normal == vec({1, 0, 0}));
  // p on y = x puts the dual point of y = x on p*.
  const auto z = dual_point(make_family_curve(vec({0, 1, -1})));
  CHECK(std::abs(dual_hyperplane(f, {0.7, 0.7}).normal.dot(z)) < 1e-15);

  const auto xy = make_family({FamilyTerm::monomial(1, 0), FamilyTerm::monomial(0, 1)}, kU);
  CHECK_THROWS_AS(dual_hyperplane(xy, {0, 0}), DegenerateDual);
  CHECK_THROWS_AS(dual_hyperplane(f, {3, 0}), DomainViolation);
}

TEST_CASE("generic_rotation") {
  SUBCASE("a point with zero first coordinate moves off") {
    DualConfig c;
    c.points = {vec({0, 1, 0}), vec({0.6, 0.8, 0})};
    c.planes = {{vec({1, 1, 2})}, {vec({1, 0, 0})}};
    const auto before = count_dual_incidences(c.points, c.planes);
    const auto r = generic_rotation(c, 3);
    CHECK(r.attempts >= 1);
    for (const auto& z : r.config.points) CHECK(std::abs(z[0]) > 1e-9);
    for (const auto& p : r.config.planes) {
      CHECK(std::abs(p.normal[0]) > 1e-9);
      CHECK(p.normal.tail(2).norm() > 1e-9);
    }
    CHECK((r.rotation.transpose() * r.rotation - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
    CHECK(count_dual_incidences(r.config.points, r.config.planes).edges == before.edges);
  }
  SUBCASE("already generic input keeps the identity") {
    DualConfig c;
    c.points = {vec({1, 1, 1})};
    c.planes = {{vec({1, 2, 3})}};
    const auto r = generic_rotation(c, 1);
    CHECK(r.attempts == 0);
    CHECK(r.config.points[0] == c.points[0]);
  }
  SUBCASE("random scenes keep their incidence graph") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = random_family_scene(families::lines(kU), 30, 20, seed);
      DualConfig c;
      for (const auto& cv : s.curves) c.points.push_back(dual_point(cv));
      for (const Vec2 p : s.points) c.planes.push_back(dual_hyperplane(s.family, p));
      const auto before = count_dual_incidences(c.points, c.planes);
      const auto r = generic_rotation(c, seed + 100);
      CHECK(count_dual_incidences(r.config.points, r.config.planes).edges == before.edges);
      CHECK(before.size() >= 20);
    }
  }
}

TEST_CASE("project_to_pi") {
  DualConfig c;
  c.points = {vec({2, 4, 6})};
  c.planes = {{vec({1, 1, 0})}};
  const auto p = project_to_pi(c);
  CHECK(p.points[0] == vec({2, 3}));
  CHECK(p.planes[0].normal == vec({1, 0}));
  CHECK(p.planes[0].offset == -1.0);

  // Scaling a dual point does not move its projection.
  DualConfig scaled;
  scaled.points = {vec({2, 4, 6}) * 0.37};
  CHECK((project_to_pi(scaled).points[0] - p.points[0]).norm() < 1e-15);

  // Pairwise incidence is unchanged by the projection.
  const auto s = random_family_scene(families::parabolas(kU), 30, 20, 8);
  DualConfig d;
  for (const auto& cv : s.curves) d.points.push_back(dual_point(cv));
  for (const Vec2 q : s.points) d.planes.push_back(dual_hyperplane(s.family, q));
  const auto r = generic_rotation(d, 2);
  const auto pr = project_to_pi(r.config);
  CHECK(count_hyperplane_incidences(pr.points, pr.planes).edges ==
        count_dual_incidences(r.config.points, r.config.planes).edges);
}

TEST_CASE("count_hyperplane_incidences") {
  CHECK(count_hyperplane_incidences(std::span<const Eigen::VectorXd>{}, std::vector<AffineHyperplane>{{vec({1, 0}), 0}})
            .size() == 0);

  // Planar lines y = a x + b as hyperplanes (-a, 1) . (x, y) = b, against the
  // point-curve counter.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(12), b(12);
  std::vector<PfaffianCurve> lines;
  std::vector<AffineHyperplane> planes;
  for (int i = 0; i < 12; ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
    lines.push_back(catalog::line(a[i], b[i]));
    planes.push_back({vec({-a[i], 1.0}), b[i]});
  }
  std::vector<Vec2> pts;
  std::vector<Eigen::VectorXd> zs;
  for (int k = 0; k < 40; ++k) {
    Vec2 p{u(rng), u(rng)};
    if (k % 2 == 0) p.y = a[k % 12] * p.x + b[k % 12];
    pts.push_back(p);
    zs.push_back(vec({p.x, p.y}));
  }
  std::vector<PreparedCurve> prepared;
  for (std::size_t i = 0; i < lines.size(); ++i)
    prepared.push_back(prepare_curve(lines[i], {-3, 3, -3, 3}, 1e-3, static_cast<int>(i)));
  const auto planar = count_incidences(pts, prepared);
  const auto hyper = count_hyperplane_incidences(zs, planes);
  CHECK(hyper.edges == planar.edges);
  CHECK(hyper.size() >= 20);

  // Constructed containments: the plane z3 = 1 holds exactly the points with z3 = 1.
  const std::vector<Eigen::VectorXd> p3{vec({0, 0, 1}), vec({5, -2, 1}), vec({1, 1, 0.5})};
  const std::vector<AffineHyperplane> h3{{vec({0, 0, 1}), 1.0}};
  CHECK(count_hyperplane_incidences(p3, h3).size() == 2);
}

TEST_CASE("marching_squares traces a circle") {
  const auto segs = marching_squares([](Vec2 p) { return p.x * p.x + p.y * p.y - 1.0; }, kU, 256, 256);
  double len = 0.0;
  double worst = 0.0;
  for (const auto& s : segs) {
    len += distance(s.a, s.b);
    worst = std::max({worst, std::abs(norm(s.a) - 1.0), std::abs(norm(s.b) - 1.0)});
  }
  CHECK(len == doctest::Approx(2.0 * M_PI).epsilon(1e-4));
  CHECK(worst < 1e-3);
  CHECK(marching_squares([](Vec2) { return 1.0; }, kU, 16, 16).empty());
}

TEST_CASE("saddle cells follow the centre value") {
  // f = x y has a saddle at the origin; the cell centred there needs four corners of alternating sign.
  const auto segs = marching_squares([](Vec2 p) { return p.x * p.y + 0.01; }, {-1, 1, -1, 1}, 1, 1);
  CHECK(segs.size() == 2);
}

TEST_CASE("verify_duality_chain") {
  SUBCASE("line family, 50 points, 40 lines") {
    const auto s = random_family_scene(families::lines(kU), 50, 40, 5);
    const auto rep = verify_duality_chain(s.points, s.family, s.curves, 5);
    CHECK(rep.primal == rep.dual);
    CHECK(rep.dual == rep.projected);
    CHECK(rep.transpose_ok);
    CHECK(rep.primal >= 50);
  }
  SUBCASE("empty curve set") {
    const std::vector<Vec2> pts{{0.1, 0.2}, {0.5, -1}};
    const auto rep = verify_duality_chain(pts, families::lines(kU), std::span<const FamilyCurve>{});
    CHECK(rep.primal == 0);
    CHECK(rep.dual == 0);
    CHECK(rep.projected == 0);
  }
  SUBCASE("exponential term") {
    const auto f = make_family({FamilyTerm::monomial(0, 0), FamilyTerm::monomial(1, 0), FamilyTerm::exp(Poly2::x())}, kU);
    const auto s = random_family_scene(f, 30, 20, 3);
    const auto rep = verify_duality_chain(s.points, s.family, s.curves, 3);
    CHECK(rep.primal == rep.projected);
  }
  SUBCASE("d = 4 families") {
    for (const auto& f : {families::parabolas(kU), families::exp_lines(kU), families::log_graphs({0.2, 3, -2, 2})}) {
      const auto s = random_family_scene(f, 50, 40, 17);
      const auto rep = verify_duality_chain(s.points, s.family, s.curves, 17);
      CHECK(rep.primal == rep.dual);
      CHECK(rep.dual == rep.projected);
    }
  }
  SUBCASE("K_{2,t} on the dual side is K_{t,2} on the primal side") {
    const auto s = random_family_scene(families::exp_graphs(kU), 40, 30, 21);
    const auto primal = count_family_incidences(s.points, s.family, s.curves);
    IncidenceGraph dual = primal.transposed();
    for (int t = 2; t <= 4; ++t) CHECK(kst_free(dual, 2, t) == kst_free(primal, t, 2));
  }
  SUBCASE("duplicates are rejected") {
    const std::vector<FamilyCurve> dup{make_family_curve(vec({1, 1, 1})), make_family_curve(vec({2, 2, 2}))};
    CHECK_THROWS_AS(verify_duality_chain(std::span<const Vec2>{}, families::lines(kU), dup), DuplicateCurve);
  }
}

TEST_CASE("family JSON round trip") {
  const auto s = random_family_scene(families::exp_lines(kU), 6, 4, 2);
  const auto back = family_scene_from_json(family_scene_to_json(s));
  CHECK(back.family.dimension() == 4);
  CHECK(back.family.terms[3].kind == FamilyTerm::Kind::Exp);
  CHECK(back.points.size() == 6);
  REQUIRE(back.curves.size() == 4);
  CHECK((back.curves[2].coeffs - s.curves[2].coeffs).norm() < 1e-15);
  CHECK(family_scene_to_json(back) == family_scene_to_json(s));
  CHECK_THROWS_AS(family_from_json("{\"terms\": [{\"sin\": 1}], \"U\": [0,1,0,1]}"), FormatError);
  CHECK_THROWS_AS(family_from_json("not json"), FormatError);
}
