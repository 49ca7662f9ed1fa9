#include "pfaffinc/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "pfaffinc/errors.hpp"

namespace pfaffinc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kChunkSegments = 32;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double refine_vx_root(const PfaffianCurve& c, double a, double b) {
  auto g = [&](double t) { return c.field().vx(c.point(t)); };
  double ga = g(a);
  double mid = 0.5 * (a + b);
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double gm = g(mid);
    if (std::abs(gm) <= 1e-10 && (b - a) < 1e-9) break;
    if (gm == 0.0) break;
    if (sign_of(gm) == sign_of(ga)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return mid;
}

bool full_period(const PfaffianCurve& c, const std::vector<TraceSample>& comp) {
  if (!c.periodic()) return false;
  const Interval d = c.domain();
  return comp.front().t - d.lo < 1e-6 && d.hi - comp.back().t < 1e-6;
}

bool on_rect_boundary(const Rect& r, Vec2 p) {
  const double e = 1e-9 * (1.0 + std::max(r.width(), r.height()));
  return std::abs(p.x - r.xmin) <= e || std::abs(p.x - r.xmax) <= e || std::abs(p.y - r.ymin) <= e ||
         std::abs(p.y - r.ymax) <= e;
}

}  // namespace

std::vector<VerticalTangent> vertical_tangents(const PfaffianCurve& curve, const CurveTrace& trace) {
  std::vector<VerticalTangent> out;
  auto emit = [&](double t) { out.push_back({t, curve.point(t)}); };
  for (const auto& comp : trace.components) {
    std::vector<double> vx(comp.size());
    for (std::size_t k = 0; k < comp.size(); ++k) vx[k] = curve.field().vx(comp[k].p);
    std::int64_t last = -1;
    for (std::size_t k = 0; k < comp.size(); ++k) {
      if (sign_of(vx[k]) == 0) continue;
      if (last >= 0 && sign_of(vx[k]) != sign_of(vx[last])) {
        if (static_cast<std::int64_t>(k) == last + 1)
          emit(refine_vx_root(curve, comp[last].t, comp[k].t));
        else
          emit(comp[(last + k) / 2].t);
      }
      last = static_cast<std::int64_t>(k);
    }
    if (full_period(curve, comp)) {
      const double period = curve.domain().hi - curve.domain().lo;
      const auto first = std::find_if(vx.begin(), vx.end(), [](double v) { return v != 0.0; });
      const auto lastnz = std::find_if(vx.rbegin(), vx.rend(), [](double v) { return v != 0.0; });
      if (first != vx.end() && sign_of(*first) != sign_of(*lastnz) &&
          first == vx.begin() && lastnz == vx.rbegin())
        emit(refine_vx_root(curve, comp.back().t, comp.front().t + period));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return out;
}

std::vector<Vec2> vertical_tangent_points(const PfaffianCurve& curve, const CurveTrace& trace) {
  std::vector<Vec2> pts;
  for (const auto& vt : vertical_tangents(curve, trace)) pts.push_back(vt.p);
  return pts;
}

std::vector<MonotoneArc> monotone_arcs(const PfaffianCurve& curve, const CurveTrace& trace,
                                       const std::vector<VerticalTangent>& tangents, int curve_id) {
  std::vector<MonotoneArc> arcs;
  const double period = curve.periodic() ? curve.domain().hi - curve.domain().lo : 0.0;

  for (const auto& comp : trace.components) {
    struct Break {
      TraceSample s;
      ArcEnd kind;
    };
    const bool cyclic = full_period(curve, comp);
    std::vector<Break> breaks;
    const double t_first = comp.front().t, t_last = comp.back().t;
    for (const auto& vt : tangents) {
      const bool inside = vt.t > t_first && vt.t < t_last;
      const bool in_gap = cyclic && vt.t >= t_last && vt.t < t_first + period;
      if (inside || in_gap) breaks.push_back({{vt.t, vt.p}, ArcEnd::VerticalTangent});
    }
    std::sort(breaks.begin(), breaks.end(), [](const Break& a, const Break& b) { return a.s.t < b.s.t; });

    std::vector<std::pair<Break, Break>> pieces;
    if (cyclic && !breaks.empty()) {
      for (std::size_t i = 0; i + 1 < breaks.size(); ++i) pieces.emplace_back(breaks[i], breaks[i + 1]);
      Break wrap = breaks.front();
      wrap.s.t += period;
      pieces.emplace_back(breaks.back(), wrap);
    } else {
      auto end_kind = [&](Vec2 p) { return on_rect_boundary(trace.bbox, p) ? ArcEnd::Viewport : ArcEnd::DomainEnd; };
      Break prev{comp.front(), end_kind(comp.front().p)};
      for (const auto& b : breaks) {
        pieces.emplace_back(prev, b);
        prev = b;
      }
      pieces.emplace_back(prev, Break{comp.back(), end_kind(comp.back().p)});
    }

    for (const auto& [a, b] : pieces) {
      MonotoneArc arc;
      arc.curve = curve_id;
      std::vector<TraceSample> s;
      s.push_back(a.s);
      for (const auto& q : comp)
        if (q.t > a.s.t && q.t < b.s.t) s.push_back(q);
      if (cyclic)
        for (const auto& q : comp)
          if (q.t + period > a.s.t && q.t + period < b.s.t) s.push_back({q.t + period, q.p});
      s.push_back(b.s);
      ArcEnd lk = a.kind, rk = b.kind;
      if (s.back().p.x < s.front().p.x) {
        std::reverse(s.begin(), s.end());
        std::swap(lk, rk);
      }
      // Drop samples that break x-monotonicity through rounding near tangents.
      std::vector<TraceSample> clean;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const bool is_end = (i + 1 == s.size());
        if (!clean.empty() && s[i].p.x <= clean.back().p.x) {
          if (!is_end) continue;
          if (clean.size() > 1) clean.pop_back(); else continue;
        }
        clean.push_back(s[i]);
      }
      if (clean.size() < 2 || !(clean.back().p.x > clean.front().p.x)) continue;
      arc.samples = std::move(clean);
      arc.x0 = arc.samples.front().p.x;
      arc.x1 = arc.samples.back().p.x;
      arc.left_end = lk;
      arc.right_end = rk;
      arc.index = static_cast<int>(arcs.size());
      arcs.push_back(std::move(arc));
    }
  }
  return arcs;
}

std::size_t MonotoneArc::bracket(double x) const {
  const auto it = std::upper_bound(samples.begin(), samples.end(), x,
                                   [](double v, const TraceSample& s) { return v < s.p.x; });
  const auto idx = static_cast<std::ptrdiff_t>(it - samples.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(samples.size()) - 2));
}

double MonotoneArc::t_at(const PfaffianCurve& c, double x) const {
  x = std::clamp(x, x0, x1);
  if (x == x0) return samples.front().t;
  if (x == x1) return samples.back().t;
  if (c.graph_form()) return x;
  const std::size_t i = bracket(x);
  double lo = samples[i].t, hi = samples[i + 1].t;
  double flo = samples[i].p.x - x, fhi = samples[i + 1].p.x - x;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  double t = lo + (hi - lo) * (flo / (flo - fhi));
  const double ftol = 4e-16 * std::max(1.0, std::abs(x));
  for (int it = 0; it < 80; ++it) {
    const Vec2 p = c.point(t);
    const double f = p.x - x;
    if (std::abs(f) <= ftol) break;
    if (sign_of(f) == sign_of(flo)) {
      lo = t;
      flo = f;
    } else {
      hi = t;
      fhi = f;
    }
    if (std::abs(hi - lo) <= 1e-15 * std::max(1.0, std::abs(t))) break;
    const double d = c.field().vx(p);
    double next = (d != 0.0) ? t - f / d : 0.5 * (lo + hi);
    if (!(next > std::min(lo, hi) && next < std::max(lo, hi))) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

double MonotoneArc::y_at(const PfaffianCurve& c, double x) const {
  if (x <= x0) return samples.front().p.y;
  if (x >= x1) return samples.back().p.y;
  return c.point(t_at(c, x)).y;
}

double MonotoneArc::y_linear(double x) const {
  const std::size_t i = bracket(x);
  const Vec2 a = samples[i].p, b = samples[i + 1].p;
  if (b.x == a.x) return a.y;
  const double u = std::clamp((x - a.x) / (b.x - a.x), 0.0, 1.0);
  return a.y + u * (b.y - a.y);
}

PreparedCurve prepare_curve(const PfaffianCurve& curve, const Rect& viewport, double step, int id) {
  PreparedCurve pc;
  pc.id = id;
  pc.curve = curve;
  pc.trace = trace_curve(curve, viewport, step);
  pc.tangents = vertical_tangents(curve, pc.trace);
  pc.arcs = monotone_arcs(curve, pc.trace, pc.tangents, id);
  for (int ci = 0; ci < static_cast<int>(pc.trace.components.size()); ++ci) {
    const auto& comp = pc.trace.components[ci];
    const int nseg = static_cast<int>(comp.size()) - 1;
    for (int first = 0; first < nseg; first += kChunkSegments) {
      PreparedCurve::Chunk ch;
      ch.component = ci;
      ch.first = first;
      ch.last = std::min(nseg, first + kChunkSegments);
      ch.box = {kInf, -kInf, kInf, -kInf};
      for (int i = ch.first; i <= ch.last; ++i) {
        const Vec2 p = comp[i].p;
        ch.box.xmin = std::min(ch.box.xmin, p.x);
        ch.box.xmax = std::max(ch.box.xmax, p.x);
        ch.box.ymin = std::min(ch.box.ymin, p.y);
        ch.box.ymax = std::max(ch.box.ymax, p.y);
      }
      for (int i = ch.first; i < ch.last; ++i) {
        const double tm = 0.5 * (comp[i].t + comp[i + 1].t);
        const Vec2 chord_mid = 0.5 * (comp[i].p + comp[i + 1].p);
        ch.sag = std::max(ch.sag, 2.0 * distance(curve.point(tm), chord_mid));
      }
      pc.max_sag = std::max(pc.max_sag, ch.sag);
      pc.chunks.push_back(ch);
    }
  }
  return pc;
}

ClosestPoint closest_point(const PreparedCurve& pc, Vec2 p, double screen) {
  ClosestPoint best{kInf, 0.0, {}};
  const auto& comps = pc.trace.components;
  for (const auto& ch : pc.chunks) {
    const double margin = screen + ch.sag;
    if (p.x < ch.box.xmin - margin || p.x > ch.box.xmax + margin || p.y < ch.box.ymin - margin ||
        p.y > ch.box.ymax + margin)
      continue;
    const auto& comp = comps[ch.component];
    int run_start = -1;
    auto refine_run = [&](int i0, int i1) {
      const int n = static_cast<int>(comp.size());
      const double ta = comp[std::max(i0 - 1, 0)].t;
      const double tb = comp[std::min(i1 + 2, n - 1)].t;
      auto sq = [&](double t) {
        const Vec2 d = pc.curve.point(t) - p;
        return dot(d, d);
      };
      auto [t, v] = boost::math::tools::brent_find_minima(sq, ta, tb, 52);
      // Brent resolves t only to about sqrt(eps); Gauss-Newton on the foot-point
      // condition recovers full precision for near-zero distances.
      for (int it = 0; it < 6; ++it) {
        const Vec2 q = pc.curve.point(t);
        const Vec2 v_t = pc.curve.field()(q);
        const double vv = dot(v_t, v_t);
        if (!(vv > 0.0)) break;
        const double next = std::clamp(t - dot(q - p, v_t) / vv, ta, tb);
        const double nv = sq(next);
        if (!(nv < v)) break;
        t = next;
        v = nv;
      }
      const double dist = std::sqrt(std::max(0.0, v));
      if (dist < best.distance) best = {dist, t, pc.curve.point(t)};
    };
    for (int i = ch.first; i < ch.last; ++i) {
      const bool near = segment_distance(p, comp[i].p, comp[i + 1].p) <= margin;
      if (near && run_start < 0) run_start = i;
      if (!near && run_start >= 0) {
        refine_run(run_start, i - 1);
        run_start = -1;
      }
    }
    if (run_start >= 0) refine_run(run_start, ch.last - 1);
  }
  return best;
}

}  // namespace pfaffinc
