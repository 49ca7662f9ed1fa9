#pragma once

#include <cstdint>
#include <vector>

#include "pfaffinc/arcs.hpp"

namespace pfaffinc {

/// (k1 + k2)(2 k1 + k2) + k1 + 1.
std::int64_t pfaffian_bezout_bound(int k1, int k2);

/// Intersection points of two prepared curves inside their common viewport.
///
/// Each pair of monotone arcs is scanned on the merged sample abscissas where
/// their chunk boxes overlap. Sign changes of the exact height difference are
/// bisected, touching contacts are found as local minima of |difference| below
/// tol, and arc ends lying on the other curve are added. Points closer than
/// 10 tol are merged. Throws SharedComponent when more than the ceiling many
/// points survive and the curves overlap along an interval.
std::vector<Vec2> intersect_curves(const PreparedCurve& a, const PreparedCurve& b, double tol = 1e-9);
std::vector<Vec2> intersect_curves(const PfaffianCurve& c1, const PfaffianCurve& c2, const Rect& viewport,
                                   double step = 1e-3, double tol = 1e-9);

/// True iff |found| does not exceed the ceiling for the two field degrees.
bool check_bezout(const PfaffianCurve& c1, const PfaffianCurve& c2, const std::vector<Vec2>& found);

}  // namespace pfaffinc
