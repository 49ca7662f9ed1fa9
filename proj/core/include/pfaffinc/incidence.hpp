#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pfaffinc/arcs.hpp"
#include "pfaffinc/cutting.hpp"
#include "pfaffinc/scene.hpp"

namespace pfaffinc {

/// Bipartite point-curve graph. Edges are (point id, curve id), sorted.
struct IncidenceGraph {
  int m = 0;
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  std::size_t size() const { return edges.size(); }
  /// Same graph with the two sides exchanged.
  IncidenceGraph transposed() const;
};

/// Brute force: p is on a curve when its distance to the closed form is at
/// most tol. Candidates come from the trace within 100 tol.
IncidenceGraph count_incidences(std::span<const Vec2> points, const std::vector<PreparedCurve>& curves,
                                double tol = 1e-7);
IncidenceGraph count_incidences(const Scene& scene, double tol = 1e-7);

bool is_incident(const PreparedCurve& curve, Vec2 p, double tol = 1e-7);

/// True iff no s points and t curves are all pairwise adjacent. Searches the
/// side with fewer candidate subsets; throws ComplexityGuard when both
/// C(m, s) and C(n, t) exceed 1e8.
bool kst_free(const IncidenceGraph& graph, int s, int t);

struct IncidenceBreakdown {
  std::vector<std::int64_t> per_cell;        // I(P_i, Gamma_i)
  std::int64_t on_boundary_vs_nonsample = 0;  // I(P_0, Gamma \ Gamma_0)
  std::int64_t on_boundary_vs_sample = 0;     // I(P_0, Gamma_0)
  std::int64_t total = 0;
  int boundary_points = 0;

  std::int64_t per_cell_sum() const;
};

/// Splits the incidences by the cutting: interior points only meet the
/// curves crossing their cell; boundary points meet everything. Throws
/// InconsistentScene if the cutting was built for another curve set or a
/// point lies outside its viewport.
IncidenceBreakdown count_via_cutting(std::span<const Vec2> points, const std::vector<PreparedCurve>& curves,
                                     const Cutting& cutting, double tol = 1e-7);

// Bound evaluators (constant factor C, natural log).
double bound_kst(double m, double n, int s, double C = 1.0);
double bound_kst_dual(double m, double n, int t, double C = 1.0);
double bound_pach_sharir(double m, double n, int s, double C = 1.0);
double bound_pfaffian_curves(double m, double n, int s, double C = 1.0);
double bound_pfaffian_family(double m, double n, int d, double eps, double C = 1.0);
double bound_hyperplanes(double m, double n, int d, int s, double eps, double C = 1.0);

enum class Regime { Balanced, FewPoints, FewCurves };
std::string_view to_string(Regime r);

struct OptimalR {
  int r = 1;
  double raw = 0.0;
  Regime regime = Regime::Balanced;
};

/// r* = m^{s/(2s-1)} / (n^{1/(2s-1)} (ln n)^{2s/(2s-1)}), rounded and clamped
/// to [1, n-1].
OptimalR optimal_r(double m, double n, int s);

/// Smallest C with counts[i] <= C * unit_bounds[i] for all i.
double fit_constant(std::span<const double> counts, std::span<const double> unit_bounds);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace pfaffinc
