#pragma once

#include <vector>

#include "pfaffinc/curve.hpp"
#include "pfaffinc/trace.hpp"

namespace pfaffinc {

enum class ArcEnd { Viewport, VerticalTangent, DomainEnd };

/// A piece of a traced curve on which x(t) is strictly monotone, so the piece
/// is the graph of a function of x over [x0, x1].
struct MonotoneArc {
  int curve = -1;
  int index = 0;
  /// Samples sorted by increasing x; the first and last are the exact ends.
  std::vector<TraceSample> samples;
  double x0 = 0.0;
  double x1 = 0.0;
  ArcEnd left_end = ArcEnd::Viewport;
  ArcEnd right_end = ArcEnd::Viewport;

  bool covers(double x) const { return x >= x0 && x <= x1; }
  Vec2 left() const { return samples.front().p; }
  Vec2 right() const { return samples.back().p; }
  /// Index i with samples[i].p.x <= x <= samples[i+1].p.x (clamped).
  std::size_t bracket(double x) const;
  /// Parameter whose point has abscissa x, by safeguarded Newton in the bracket.
  double t_at(const PfaffianCurve& c, double x) const;
  /// Exact height of the arc at x (closed form, not the polyline).
  double y_at(const PfaffianCurve& c, double x) const;
  /// Height of the polyline at x.
  double y_linear(double x) const;
};

struct VerticalTangent {
  double t = 0.0;
  Vec2 p;
};

/// Everything derived once per curve in a scene: trace, vertical tangents,
/// monotone arcs, and chunked bounding boxes for proximity queries.
struct PreparedCurve {
  struct Chunk {
    int component = 0;
    int first = 0;  // first segment index
    int last = 0;   // one past the last segment index
    Rect box;
    double sag = 0.0;
  };

  int id = -1;
  PfaffianCurve curve;
  CurveTrace trace;
  std::vector<VerticalTangent> tangents;
  std::vector<MonotoneArc> arcs;
  std::vector<Chunk> chunks;
  double max_sag = 0.0;
};

PreparedCurve prepare_curve(const PfaffianCurve& curve, const Rect& viewport, double step, int id = 0);

/// Points of the trace where V_x changes sign, refined by bisection on t until
/// |V_x| <= 1e-10. For a closed curve traced over a full period the wrap-around
/// gap is searched as well.
std::vector<VerticalTangent> vertical_tangents(const PfaffianCurve& curve, const CurveTrace& trace);
std::vector<Vec2> vertical_tangent_points(const PfaffianCurve& curve, const CurveTrace& trace);

/// Splits the trace into x-monotone arcs at the given vertical tangents.
std::vector<MonotoneArc> monotone_arcs(const PfaffianCurve& curve, const CurveTrace& trace,
                                       const std::vector<VerticalTangent>& tangents, int curve_id);

struct ClosestPoint {
  double distance = 0.0;
  double t = 0.0;
  Vec2 p;
};

/// Distance from p to the curve. Polyline distances screen candidates; any
/// candidate within `screen` (plus the local chord sag) is refined against the
/// closed form by Brent minimisation. Returns +inf distance if nothing is near.
ClosestPoint closest_point(const PreparedCurve& pc, Vec2 p, double screen);

}  // namespace pfaffinc
