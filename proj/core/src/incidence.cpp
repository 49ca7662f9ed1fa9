#include "pfaffinc/incidence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "pfaffinc/errors.hpp"

namespace pfaffinc {

namespace {

// Fixed-width-free bitset over ints.
struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(int n = 0) : w((n + 63) / 64, 0) {}
  void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  int count() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
  }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.w.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) r.w[i] = w[i] & o.w[i];
    return r;
  }
};

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Is there a k-subset of `rows` whose common neighbourhood has >= need members?
bool has_dense_subset(const std::vector<Bits>& rows, int k, int need) {
  std::vector<int> live;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i)
    if (rows[i].count() >= need) live.push_back(i);
  if (static_cast<int>(live.size()) < k) return false;
  auto dfs = [&](auto&& self, std::size_t from, int depth, const Bits& common) -> bool {
    if (depth == k) return true;
    for (std::size_t i = from; i + (k - depth) <= live.size(); ++i) {
      Bits next = depth == 0 ? rows[live[i]] : (common & rows[live[i]]);
      if (next.count() < need) continue;
      if (self(self, i + 1, depth + 1, next)) return true;
    }
    return false;
  };
  return dfs(dfs, 0, 0, Bits{});
}

}  // namespace

IncidenceGraph IncidenceGraph::transposed() const {
  IncidenceGraph g{n, m, {}};
  for (const auto& [p, c] : edges) g.edges.emplace_back(c, p);
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

bool is_incident(const PreparedCurve& curve, Vec2 p, double tol) {
  if (curve.arcs.empty() && curve.trace.empty()) return false;
  return closest_point(curve, p, 100.0 * tol).distance <= tol;
}

IncidenceGraph count_incidences(std::span<const Vec2> points, const std::vector<PreparedCurve>& curves, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("incidence tolerance must be positive");
  IncidenceGraph g;
  g.m = static_cast<int>(points.size());
  g.n = static_cast<int>(curves.size());
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j)
      if (is_incident(curves[j], points[i], tol)) g.edges.emplace_back(i, j);
  return g;
}

IncidenceGraph count_incidences(const Scene& scene, double tol) {
  return count_incidences(scene.points, prepare_scene(scene), tol);
}

bool kst_free(const IncidenceGraph& graph, int s, int t) {
  if (s < 1 || t < 1) throw InvalidArgument("kst_free needs s, t >= 1");
  const double cost_points = binomial(graph.m, s), cost_curves = binomial(graph.n, t);
  if (std::min(cost_points, cost_curves) > 1e8) throw ComplexityGuard("too many subsets to enumerate");
  if (cost_points <= cost_curves) {
    std::vector<Bits> rows(graph.m, Bits(graph.n));
    for (const auto& [p, c] : graph.edges) rows[p].set(c);
    return !has_dense_subset(rows, s, t);
  }
  std::vector<Bits> rows(graph.n, Bits(graph.m));
  for (const auto& [p, c] : graph.edges) rows[c].set(p);
  return !has_dense_subset(rows, t, s);
}

std::int64_t IncidenceBreakdown::per_cell_sum() const {
  return std::accumulate(per_cell.begin(), per_cell.end(), std::int64_t{0});
}

IncidenceBreakdown count_via_cutting(std::span<const Vec2> points, const std::vector<PreparedCurve>& curves,
                                     const Cutting& cutting, double tol) {
  if (!cutting.curves || cutting.curves->size() != curves.size() ||
      cutting.crossing_curves.size() != cutting.cells.size())
    throw InconsistentScene("cutting was built for a different curve set");
  IncidenceBreakdown b;
  b.per_cell.assign(cutting.cells.size(), 0);
  for (const Vec2 p : points) {
    if (!cutting.viewport.contains(p)) throw InconsistentScene("point outside the cutting viewport");
    const Location loc = locate_point(cutting, p, tol);
    if (!loc.boundary) {
      const int cell = loc.cell();
      for (int id : cutting.crossing_curves[cell])
        if (is_incident(curves[id], p, tol)) ++b.per_cell[cell];
      continue;
    }
    ++b.boundary_points;
    for (int id = 0; id < static_cast<int>(curves.size()); ++id) {
      if (!is_incident(curves[id], p, tol)) continue;
      if (cutting.in_sample[id])
        ++b.on_boundary_vs_sample;
      else
        ++b.on_boundary_vs_nonsample;
    }
  }
  b.total = b.per_cell_sum() + b.on_boundary_vs_nonsample + b.on_boundary_vs_sample;
  return b;
}

double bound_kst(double m, double n, int s, double C) {
  if (s < 2) throw InvalidArgument("s must be at least 2");
  return C * (m * std::pow(n, 1.0 - 1.0 / s) + n);
}

double bound_kst_dual(double m, double n, int t, double C) {
  if (t < 2) throw InvalidArgument("t must be at least 2");
  return C * (std::pow(m, 1.0 - 1.0 / t) * n + m);
}

double bound_pach_sharir(double m, double n, int s, double C) {
  if (s < 2) throw InvalidArgument("s must be at least 2");
  const double q = 2.0 * s - 1.0;
  return C * (std::pow(m, s / q) * std::pow(n, (2.0 * s - 2.0) / q) + n + m);
}

double bound_pfaffian_curves(double m, double n, int s, double C) {
  if (s < 2) throw InvalidArgument("s must be at least 2");
  if (n < 2) throw InvalidArgument("n must be at least 2");
  const double q = 2.0 * s - 1.0, L = std::log(n);
  const double e = (2.0 * s - 2.0) / q;
  return C * (std::pow(m, s / q) * std::pow(n, e) * std::pow(L, e) + n * L * L + m);
}

double bound_pfaffian_family(double m, double n, int d, double eps, double C) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  const double q = 2.0 * d - 3.0;
  return C * (std::pow(n, (2.0 * d - 4.0) / q + eps) * std::pow(m, (d - 1.0) / q) + m + n);
}

double bound_hyperplanes(double m, double n, int d, int s, double eps, double C) {
  if (d < 2 || s < 2) throw InvalidArgument("d and s must be at least 2");
  const double q = static_cast<double>(s) * d - 1.0;
  return C * (std::pow(m, (static_cast<double>(s) * d - s) / q + eps) * std::pow(n, (static_cast<double>(s) * d - d) / q) +
              m + n);
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Balanced: return "balanced";
    case Regime::FewPoints: return "few-points regime";
    case Regime::FewCurves: return "n<√m regime";
  }
  return "balanced";
}

OptimalR optimal_r(double m, double n, int s) {
  if (n < 2) throw InvalidArgument("n must be at least 2");
  if (s < 2) throw InvalidArgument("s must be at least 2");
  const double q = 2.0 * s - 1.0;
  OptimalR out;
  out.raw = std::pow(m, s / q) / (std::pow(n, 1.0 / q) * std::pow(std::log(n), 2.0 * s / q));
  const int hi = static_cast<int>(n) - 1;
  if (out.raw < 1.0) {
    out.r = 1;
    out.regime = Regime::FewPoints;
  } else if (out.raw >= n) {
    out.r = hi;
    out.regime = Regime::FewCurves;
  } else {
    out.r = std::clamp(static_cast<int>(std::lround(out.raw)), 1, std::max(1, hi));
  }
  return out;
}

double fit_constant(std::span<const double> counts, std::span<const double> unit_bounds) {
  if (counts.size() != unit_bounds.size()) throw InvalidArgument("counts and bounds differ in length");
  double c = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (unit_bounds[i] > 0.0) c = std::max(c, counts[i] / unit_bounds[i]);
  return c;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs two or more paired values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("slope fit needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = k * sxx - sx * sx;
  if (den == 0.0) throw InvalidArgument("slope fit needs two distinct x values");
  return (k * sxy - sx * sy) / den;
}

}  // namespace pfaffinc
