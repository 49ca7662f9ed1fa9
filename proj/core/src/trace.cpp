#include "pfaffinc/trace.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "pfaffinc/errors.hpp"

namespace pfaffinc {

namespace {

struct Probe {
  bool valid = false;
  bool inside = false;
  Vec2 p;
};

Probe probe(const PfaffianCurve& c, const Rect& vp, double t) {
  Probe r;
  if (!c.defined_at(t)) return r;
  r.p = c.point(t);
  r.valid = std::isfinite(r.p.x) && std::isfinite(r.p.y);
  r.inside = r.valid && vp.contains(r.p);
  return r;
}

// Locates the viewport crossing between an inside and an outside parameter;
// returns the inside-most sample of the bisection.
TraceSample refine_crossing(const PfaffianCurve& c, const Rect& vp, double t_in, double t_out) {
  for (int i = 0; i < 64; ++i) {
    const double mid = 0.5 * (t_in + t_out);
    if (mid == t_in || mid == t_out) break;
    if (probe(c, vp, mid).inside)
      t_in = mid;
    else
      t_out = mid;
  }
  return {t_in, c.point(t_in)};
}

}  // namespace

std::size_t CurveTrace::sample_count() const {
  std::size_t n = 0;
  for (const auto& comp : components) n += comp.size();
  return n;
}

CurveTrace trace_curve(const PfaffianCurve& curve, const Rect& viewport, double step) {
  if (!(step > 0.0)) throw InvalidArgument("trace step must be positive");
  if (curve.domain().empty()) throw InvalidArgument("curve domain is empty");
  if (!viewport.valid()) throw InvalidArgument("viewport is degenerate");

  CurveTrace trace;
  trace.step = step;
  trace.bbox = viewport;

  const Interval w = curve.parameter_window(viewport);
  if (w.empty()) throw EmptyTrace(curve.describe() + " misses the viewport");
  const double span = w.hi - w.lo;
  const double count = std::ceil(span / step);
  if (count > 5e7) throw InvalidArgument("trace would need more than 5e7 samples");
  const auto n = static_cast<std::int64_t>(std::max(1.0, count));
  const double h = span / static_cast<double>(n);

  std::vector<TraceSample> current;
  auto close = [&] {
    if (current.size() >= 2) trace.components.push_back(std::move(current));
    current.clear();
  };

  Probe prev;
  double t_prev = w.lo;
  for (std::int64_t k = 0; k <= n; ++k) {
    const double t = (k == n) ? w.hi : w.lo + static_cast<double>(k) * h;
    const Probe cur = probe(curve, viewport, t);
    if (cur.inside) {
      if (current.empty() && k > 0 && prev.valid && !prev.inside) {
        const TraceSample entry = refine_crossing(curve, viewport, t, t_prev);
        if (entry.t < t) current.push_back(entry);
      }
      current.push_back({t, cur.p});
    } else if (!current.empty()) {
      if (cur.valid) {
        const TraceSample exit = refine_crossing(curve, viewport, t_prev, t);
        if (exit.t > current.back().t) current.push_back(exit);
      }
      close();
    }
    prev = cur;
    t_prev = t;
  }
  close();
  if (trace.components.empty()) throw EmptyTrace(curve.describe() + " misses the viewport");
  return trace;
}

bool is_vertical_like(const CurveTrace& trace, double eps) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& comp : trace.components)
    for (const auto& s : comp) {
      lo = std::min(lo, s.p.x);
      hi = std::max(hi, s.p.x);
    }
  return hi - lo < eps;
}

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

SeparationReport check_separating_conditions(const PfaffianCurve& curve, const CurveTrace& trace,
                                             const SeparationOptions& opts) {
  return check_separating_conditions(curve, curve.field(), trace, opts);
}

SeparationReport check_separating_conditions(const PfaffianCurve& curve, const VectorField& field,
                                             const CurveTrace& trace, const SeparationOptions& opts) {
  if (trace.empty()) throw InvalidArgument("trace is empty");
  SeparationReport rep;
  rep.min_field_norm = std::numeric_limits<double>::infinity();

  // (i) and (ii)
  const double h = opts.derivative_step;
  for (const auto& comp : trace.components) {
    for (std::size_t i = 0; i < comp.size(); ++i) {
      const TraceSample& s = comp[i];
      const Vec2 v = field(s.p);
      rep.min_field_norm = std::min(rep.min_field_norm, norm(v));
      if (i == 0 || i + 1 == comp.size()) continue;
      if (!curve.defined_at(s.t - h) || !curve.defined_at(s.t + h)) continue;
      const Vec2 num = (1.0 / (2.0 * h)) * (curve.point(s.t + h) - curve.point(s.t - h));
      const double err = norm(num - v) / std::max(1.0, norm(v));
      if (err > rep.max_tangent_error) rep.max_tangent_error = err;
      if (err > opts.tangent_tol && !rep.first_tangent_failure) {
        rep.tangent_match = CheckStatus::Fail;
        rep.first_tangent_failure = s;
      }
    }
  }
  if (!(rep.min_field_norm > 1e-12)) rep.nonvanishing = CheckStatus::Fail;

  // (iii) raster the trace, label the complement, and look at which side of
  // the curve each region is seen from.
  const int g = opts.grid;
  const Rect& box = trace.bbox;
  const double cw = box.width() / g, ch = box.height() / g;
  auto cell_of = [&](Vec2 p) -> int {
    const int i = static_cast<int>(std::floor((p.x - box.xmin) / cw));
    const int j = static_cast<int>(std::floor((p.y - box.ymin) / ch));
    if (i < 0 || j < 0 || i >= g || j >= g) return -1;
    return j * g + i;
  };
  std::vector<int> label(static_cast<std::size_t>(g) * g, -1);  // -2 marks walls
  const double sub = 0.25 * std::min(cw, ch);
  for (const auto& comp : trace.components)
    for (std::size_t i = 0; i + 1 < comp.size(); ++i) {
      const Vec2 a = comp[i].p, b = comp[i + 1].p;
      const int pieces = 1 + static_cast<int>(distance(a, b) / sub);
      for (int k = 0; k <= pieces; ++k) {
        const int c = cell_of(a + (static_cast<double>(k) / pieces) * (b - a));
        if (c >= 0) label[c] = -2;
      }
    }
  int regions = 0;
  std::vector<int> stack;
  for (int start = 0; start < g * g; ++start) {
    if (label[start] != -1) continue;
    label[start] = regions;
    stack.push_back(start);
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int i = c % g, j = c / g;
      const int nb[4] = {i > 0 ? c - 1 : -1, i + 1 < g ? c + 1 : -1, j > 0 ? c - g : -1,
                         j + 1 < g ? c + g : -1};
      for (int d : nb)
        if (d >= 0 && label[d] == -1) {
          label[d] = regions;
          stack.push_back(d);
        }
    }
    ++regions;
  }
  std::vector<std::uint8_t> sides(regions, 0);  // bit 0: left, bit 1: right
  const double offset = 2.5 * std::max(cw, ch);
  int probes = 0;
  for (const auto& comp : trace.components) {
    const std::size_t stride = std::max<std::size_t>(1, comp.size() / 400);
    for (std::size_t i = 1; i + 1 < comp.size(); i += stride) {
      const Vec2 v = field(comp[i].p);
      const double len = norm(v);
      if (!(len > 0.0)) continue;
      const Vec2 left{-v.y / len, v.x / len};
      for (int side = 0; side < 2; ++side) {
        const Vec2 q = comp[i].p + (side == 0 ? offset : -offset) * left;
        const int c = cell_of(q);
        if (c < 0 || label[c] < 0) continue;
        sides[label[c]] |= static_cast<std::uint8_t>(1u << side);
        ++probes;
      }
    }
  }
  if (probes == 0) {
    rep.side_consistent = CheckStatus::Inconclusive;
    rep.note = "no usable side probes";
  } else {
    rep.side_consistent = CheckStatus::Pass;
    for (int r = 0; r < regions; ++r)
      if (sides[r] == 3) {
        rep.side_consistent = CheckStatus::Fail;
        rep.note = "a complement region lies on both sides of the curve";
        break;
      }
  }
  return rep;
}

}  // namespace pfaffinc
