#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pfaffinc/duality.hpp"
#include "pfaffinc/scene.hpp"

namespace pfaffinc {

/// Integer grid [0, a) x [0, 2ab) and the lines y = s x + t, s < b, t < ab.
/// m = 2 a^2 b, n = a b^2, and every line meets exactly a grid points.
/// Viewport [-0.5, a - 0.5] x [-0.5, 2ab - 0.5].
Scene grid_lines(int a, int b);

/// (x, y) -> (e^x, y). Lines become log curves y = s ln X + t; the viewport
/// follows the map. Throws InvalidArgument for a curve that is not a line.
Scene exp_transform(const Scene& scene);

/// Intersection points of two unit circles: none, one (tangent within
/// 1e-12) or two.
std::vector<Vec2> unit_circle_intersections(Vec2 c1, Vec2 c2);

struct UnitCircleOptions {
  double planted = 0.5;  // fraction of points placed on pairwise intersections
  double spread = 0.0;   // side of the centre square; 0 picks sqrt(n)
};

/// n unit circles with random centres and m points, `planted` of them at
/// intersections of random circle pairs.
Scene unit_circles(int m, int n, std::uint64_t seed, const UnitCircleOptions& opts = {});

/// n distinct random catalog curves of the given kinds that meet the
/// viewport; round(planted m) points on random curves, the rest uniform.
Scene random_scene(std::span<const CurveKind> kinds, int m, int n, double planted, std::uint64_t seed,
                   const Rect& viewport = {-3.0, 3.0, -3.0, 3.0});

/// Kinds random_scene draws from by default.
std::vector<CurveKind> default_random_kinds();

/// m points and n curves of a family. Half the points are drawn uniformly in
/// U; each curve is then forced through min(d - 1, 2) of them, and the other
/// points are placed on random curves by root finding.
FamilyScene random_family_scene(const PfaffianFamily& family, int m, int n, std::uint64_t seed);

/// Grid dimensions for a sweep size N: a = round(N^{1/3}), b = round(sqrt(N / a)).
std::pair<int, int> grid_shape(int N);

struct SweepRow {
  int N = 0;
  int a = 0;
  int b = 0;
  int m = 0;
  int n = 0;
  std::int64_t incidences = 0;
};

/// Brute-force incidence counts of grid_lines (or its exp_transform image)
/// over the given sizes.
std::vector<SweepRow> grid_sweep(std::span<const int> sizes, bool exp_image = false, double tol = 1e-7);

}  // namespace pfaffinc
