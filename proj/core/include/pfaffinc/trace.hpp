#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfaffinc/curve.hpp"

namespace pfaffinc {

struct TraceSample {
  double t = 0.0;
  Vec2 p;
};

/// Numeric stand-in for a curve: polylines of closed-form samples, clipped to
/// a viewport. Samples within a component have strictly increasing t.
struct CurveTrace {
  std::vector<std::vector<TraceSample>> components;
  double step = 0.0;
  Rect bbox;

  std::size_t sample_count() const;
  bool empty() const { return components.empty(); }
};

/// Samples the parameterization on its domain with parameter spacing `step`,
/// keeping the parts inside `viewport`. Where the curve crosses the viewport
/// boundary the crossing is located by bisection and kept as an endpoint.
/// Throws EmptyTrace if nothing lies in the viewport.
CurveTrace trace_curve(const PfaffianCurve& curve, const Rect& viewport, double step);

/// True iff the trace spans less than `eps` horizontally (a vertical segment).
bool is_vertical_like(const CurveTrace& trace, double eps = 1e-9);

enum class CheckStatus { Pass, Fail, Inconclusive };
std::string_view to_string(CheckStatus s);

struct SeparationReport {
  CheckStatus tangent_match = CheckStatus::Pass;   // condition (i)
  CheckStatus nonvanishing = CheckStatus::Pass;    // condition (ii)
  CheckStatus side_consistent = CheckStatus::Inconclusive;  // condition (iii), heuristic
  double max_tangent_error = 0.0;
  double min_field_norm = 0.0;
  std::optional<TraceSample> first_tangent_failure;
  std::string note;
};

struct SeparationOptions {
  double tangent_tol = 1e-5;   // relative to max(1, |V|)
  double derivative_step = 1e-6;
  int grid = 192;              // raster resolution for the side-consistency probe
};

/// Checks the separating-solution conditions numerically. Condition (iii) is
/// a raster flood-fill heuristic: each region of viewport minus the trace
/// must see the curve on one side only.
SeparationReport check_separating_conditions(const PfaffianCurve& curve, const CurveTrace& trace,
                                             const SeparationOptions& opts = {});
SeparationReport check_separating_conditions(const PfaffianCurve& curve, const VectorField& field,
                                             const CurveTrace& trace,
                                             const SeparationOptions& opts = {});

}  // namespace pfaffinc
