#include "pfaffinc/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "pfaffinc/errors.hpp"

namespace pfaffinc {

namespace {

constexpr std::size_t kChunk = 64;

struct ArcChunk {
  double x0, x1, y0, y1;
};

std::vector<ArcChunk> arc_chunks(const MonotoneArc& arc) {
  std::vector<ArcChunk> out;
  const auto& s = arc.samples;
  for (std::size_t first = 0; first + 1 < s.size(); first += kChunk) {
    const std::size_t last = std::min(s.size() - 1, first + kChunk);
    ArcChunk c{s[first].p.x, s[last].p.x, s[first].p.y, s[first].p.y};
    for (std::size_t i = first; i <= last; ++i) {
      c.y0 = std::min(c.y0, s[i].p.y);
      c.y1 = std::max(c.y1, s[i].p.y);
    }
    out.push_back(c);
  }
  return out;
}

// Union of x-windows where the chunk boxes of the two arcs overlap.
std::vector<std::pair<double, double>> overlap_windows(const std::vector<ArcChunk>& ca,
                                                       const std::vector<ArcChunk>& cb, double margin) {
  std::vector<std::pair<double, double>> w;
  std::size_t i = 0, j = 0;
  while (i < ca.size() && j < cb.size()) {
    const double lo = std::max(ca[i].x0, cb[j].x0), hi = std::min(ca[i].x1, cb[j].x1);
    if (lo <= hi && ca[i].y0 - margin <= cb[j].y1 && cb[j].y0 - margin <= ca[i].y1) {
      if (!w.empty() && lo <= w.back().second)
        w.back().second = std::max(w.back().second, hi);
      else
        w.emplace_back(lo, hi);
    }
    if (ca[i].x1 < cb[j].x1)
      ++i;
    else
      ++j;
  }
  return w;
}

struct PairScan {
  const PreparedCurve& pa;
  const PreparedCurve& pb;
  const MonotoneArc& a;
  const MonotoneArc& b;
  double tol;
  std::vector<Vec2>& out;
  bool overlap = false;

  double diff(double x) const { return a.y_at(pa.curve, x) - b.y_at(pb.curve, x); }
  void emit(double x) { out.push_back({x, a.y_at(pa.curve, x)}); }

  void bisect(double lo, double hi, double dlo) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double dm = diff(mid);
      if (dm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((dm > 0) == (dlo > 0)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
      if (hi - lo <= tol * 1e-3 && std::abs(dm) <= tol) break;
    }
    emit(0.5 * (lo + hi));
  }

  void touch(double lo, double hi) {
    auto f = [&](double x) { return std::abs(diff(x)); };
    std::uintmax_t iters = 200;
    const auto [x, v] = boost::math::tools::brent_find_minima(f, lo, hi, 52, iters);
    if (v <= tol) emit(x);
  }

  void scan(double lo, double hi) {
    std::vector<double> xs{lo, hi};
    for (const auto* arc : {&a, &b})
      for (const auto& s : arc->samples)
        if (s.p.x > lo && s.p.x < hi) xs.push_back(s.p.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> d(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) d[i] = diff(xs[i]);

    int near_run = 0;
    double run_start = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (std::abs(d[i]) <= 100.0 * tol) {
        if (near_run++ == 0) run_start = xs[i];
        if (near_run >= 3 && xs[i] - run_start > 1e-6) overlap = true;
      } else {
        near_run = 0;
      }
      if (d[i] == 0.0) {
        emit(xs[i]);
        continue;
      }
      if (i + 1 < xs.size() && d[i + 1] != 0.0 && (d[i] > 0) != (d[i + 1] > 0)) bisect(xs[i], xs[i + 1], d[i]);
      if (i > 0 && i + 1 < xs.size() && d[i - 1] != 0.0 && d[i + 1] != 0.0 && (d[i - 1] > 0) == (d[i] > 0) &&
          (d[i] > 0) == (d[i + 1] > 0) && std::abs(d[i]) <= std::abs(d[i - 1]) &&
          std::abs(d[i]) <= std::abs(d[i + 1]))
        touch(xs[i - 1], xs[i + 1]);
    }
  }
};

void end_contacts(const PreparedCurve& pa, const PreparedCurve& pb, double tol, std::vector<Vec2>& out) {
  for (const auto& a : pa.arcs)
    for (const Vec2 e : {a.left(), a.right()})
      for (const auto& b : pb.arcs)
        if (b.covers(e.x) && std::abs(e.y - b.y_at(pb.curve, e.x)) <= 100.0 * tol) out.push_back(e);
}

std::vector<Vec2> merge_close(std::vector<Vec2> pts, double radius) {
  std::sort(pts.begin(), pts.end(), [](Vec2 u, Vec2 v) { return u.x < v.x || (u.x == v.x && u.y < v.y); });
  std::vector<Vec2> kept;
  for (const Vec2 p : pts) {
    bool dup = false;
    for (auto it = kept.rbegin(); it != kept.rend() && p.x - it->x <= radius; ++it)
      if (distance(*it, p) <= radius) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(p);
  }
  return kept;
}

}  // namespace

std::int64_t pfaffian_bezout_bound(int k1, int k2) {
  if (k1 < 0 || k2 < 0) throw InvalidArgument("Pfaffian degrees must be non-negative");
  const std::int64_t a = k1, b = k2;
  return (a + b) * (2 * a + b) + a + 1;
}

std::vector<Vec2> intersect_curves(const PreparedCurve& pa, const PreparedCurve& pb, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  std::vector<Vec2> raw;
  bool overlap = false;
  const double margin = pa.max_sag + pb.max_sag + tol;
  for (const auto& a : pa.arcs) {
    const auto ca = arc_chunks(a);
    for (const auto& b : pb.arcs) {
      if (a.x1 < b.x0 || b.x1 < a.x0) continue;
      const auto cb = arc_chunks(b);
      PairScan scan{pa, pb, a, b, tol, raw};
      for (const auto& [lo, hi] : overlap_windows(ca, cb, margin)) scan.scan(lo, hi);
      overlap = overlap || scan.overlap;
    }
  }
  end_contacts(pa, pb, tol, raw);
  end_contacts(pb, pa, tol, raw);
  auto pts = merge_close(std::move(raw), 10.0 * tol);
  const auto bound = pfaffian_bezout_bound(pa.curve.pf_degree(), pb.curve.pf_degree());
  if (overlap && static_cast<std::int64_t>(pts.size()) > bound)
    throw SharedComponent(pa.curve.describe() + " and " + pb.curve.describe() + " overlap");
  return pts;
}

std::vector<Vec2> intersect_curves(const PfaffianCurve& c1, const PfaffianCurve& c2, const Rect& viewport,
                                   double step, double tol) {
  return intersect_curves(prepare_curve(c1, viewport, step, 0), prepare_curve(c2, viewport, step, 1), tol);
}

bool check_bezout(const PfaffianCurve& c1, const PfaffianCurve& c2, const std::vector<Vec2>& found) {
  return static_cast<std::int64_t>(found.size()) <= pfaffian_bezout_bound(c1.pf_degree(), c2.pf_degree());
}

}  // namespace pfaffinc
