#include "pfaffinc/cutting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <nlohmann/json.hpp>

#include "pfaffinc/errors.hpp"
#include "pfaffinc/intersect.hpp"
#include "pfaffinc/version.hpp"

namespace pfaffinc {

namespace {

using nlohmann::json;

constexpr int kBottom = -1;
constexpr int kTop = -2;

double x_eps(const Rect& vp) { return 1e-9 * std::max(1.0, vp.width()); }
double y_eps(const Rect& vp) { return 1e-9 * std::max(1.0, vp.height()); }

std::vector<Vec2> merge_points(std::vector<Vec2> pts, double radius) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
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

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

const MonotoneArc& arc_of(const Cutting& c, int ref) {
  const auto [curve, arc] = c.arc_refs[ref];
  return (*c.curves)[curve].arcs[arc];
}

double arc_y(const Cutting& c, int ref, double x) {
  if (ref == kBottom) return c.viewport.ymin;
  if (ref == kTop) return c.viewport.ymax;
  const auto [curve, arc] = c.arc_refs[ref];
  const PreparedCurve& pc = (*c.curves)[curve];
  return pc.arcs[arc].y_at(pc.curve, x);
}

int slab_index(const Cutting& c, double x) {
  const auto it = std::upper_bound(c.xs.begin(), c.xs.end(), x);
  const auto j = static_cast<int>(it - c.xs.begin()) - 1;
  return std::clamp(j, 0, static_cast<int>(c.slabs.size()) - 1);
}

// Number of arcs of slab j lying below (x, y).
int gap_in_slab(const Cutting& c, int j, double x, double y) {
  const auto& arcs = c.slabs[j].arcs;
  int lo = 0, hi = static_cast<int>(arcs.size());
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (arc_y(c, arcs[mid], x) < y)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

std::optional<ArcRef> arc_ref(const Cutting& c, int ref, double xl, double xr) {
  if (ref < 0) return std::nullopt;
  const auto [curve, arc] = c.arc_refs[ref];
  const PreparedCurve& pc = (*c.curves)[curve];
  const MonotoneArc& a = pc.arcs[arc];
  return ArcRef{curve, arc, a.t_at(pc.curve, xl), a.t_at(pc.curve, xr)};
}

json arc_json(const std::optional<ArcRef>& a) {
  if (!a) return nullptr;
  return {{"curve", a->curve}, {"arc", a->arc}, {"t0", a->t0}, {"t1", a->t1}};
}

json wall_json(const std::optional<CellWall>& w) {
  if (!w) return nullptr;
  return {{"x", w->x}, {"ylo", w->ylo}, {"yhi", w->yhi}, {"viewport", w->viewport_side}};
}

}  // namespace

std::size_t Cutting::max_crossings() const {
  std::size_t m = 0;
  for (const auto& cc : crossing_curves) m = std::max(m, cc.size());
  return m;
}

std::vector<int> sample_curves(int n, int s, std::uint64_t seed) {
  if (s < 1) throw InvalidArgument("sample size must be at least 1");
  if (n < 1) throw InvalidArgument("cannot sample from an empty curve set");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::set<int> chosen;
  for (int i = 0; i < s; ++i) chosen.insert(pick(rng));
  return {chosen.begin(), chosen.end()};
}

int sample_size(int n, int r) {
  return static_cast<int>(std::ceil(5.0 * r * std::log(static_cast<double>(n))));
}

std::vector<Vec2> sample_events(const std::vector<PreparedCurve>& curves, const std::vector<int>& sample, double tol) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const PreparedCurve& a = curves.at(sample[i]);
    for (const auto& vt : a.tangents)
      if (a.trace.bbox.contains(vt.p)) pts.push_back(vt.p);
    if (a.arcs.empty()) continue;
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      const PreparedCurve& b = curves.at(sample[j]);
      if (b.arcs.empty()) continue;
      const auto hit = intersect_curves(a, b, tol);
      pts.insert(pts.end(), hit.begin(), hit.end());
    }
  }
  return merge_points(std::move(pts), 10.0 * tol);
}

std::vector<Ray> build_rays(const std::vector<PreparedCurve>& curves, const std::vector<int>& sample,
                            const Rect& viewport, double tol) {
  std::vector<Ray> rays;
  const double margin = std::max(100.0 * tol, y_eps(viewport));
  for (const Vec2 e : sample_events(curves, sample, tol)) {
    Ray up{e, true, viewport.ymax, -1}, down{e, false, viewport.ymin, -1};
    for (int id : sample)
      for (const auto& a : curves[id].arcs) {
        if (!a.covers(e.x)) continue;
        const double y = a.y_at(curves[id].curve, e.x);
        if (y > e.y + margin && y < up.y_end) up = {e, true, y, id};
        if (y < e.y - margin && y > down.y_end) down = {e, false, y, id};
      }
    rays.push_back(up);
    rays.push_back(down);
  }
  return rays;
}

Cutting build_cells(std::shared_ptr<const std::vector<PreparedCurve>> curves, std::vector<int> sample,
                    std::vector<Ray> rays, const Rect& viewport) {
  Cutting c;
  c.curves = std::move(curves);
  c.sample = std::move(sample);
  c.rays = std::move(rays);
  c.viewport = viewport;
  c.n = static_cast<int>(c.curves->size());
  c.in_sample.assign(c.n, 0);
  for (int id : c.sample) c.in_sample.at(id) = 1;

  const double ex = x_eps(viewport), ey = y_eps(viewport);

  // Event points: ray origins and sample arc ends.
  std::vector<Vec2> events;
  for (const auto& ray : c.rays)
    if (ray.up) events.push_back(ray.origin);
  for (int id : c.sample) {
    const auto& pc = (*c.curves)[id];
    for (int k = 0; k < static_cast<int>(pc.arcs.size()); ++k) {
      c.arc_refs.emplace_back(id, k);
      events.push_back(pc.arcs[k].left());
      events.push_back(pc.arcs[k].right());
    }
  }
  std::sort(events.begin(), events.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });

  // Cluster abscissas; cluster k becomes boundary xs[k].
  std::vector<std::vector<double>> boundary_ys{{}};
  c.xs.push_back(viewport.xmin);
  {
    std::vector<Vec2> cluster;
    auto flush = [&] {
      if (cluster.empty()) return;
      double sx = 0.0;
      for (const Vec2 p : cluster) sx += p.x;
      const double x = sx / static_cast<double>(cluster.size());
      std::vector<double> ys;
      for (const Vec2 p : cluster) ys.push_back(p.y);
      std::sort(ys.begin(), ys.end());
      if (x - viewport.xmin <= ex) {
        boundary_ys.front().insert(boundary_ys.front().end(), ys.begin(), ys.end());
      } else if (viewport.xmax - x > ex) {
        c.xs.push_back(x);
        boundary_ys.push_back(std::move(ys));
      }
      cluster.clear();
    };
    for (const Vec2 e : events) {
      if (!cluster.empty() && e.x - cluster.back().x > ex) flush();
      cluster.push_back(e);
    }
    flush();
  }
  c.xs.push_back(viewport.xmax);
  boundary_ys.emplace_back();

  // Sort the arcs of every slab at its midpoint.
  const int nslabs = static_cast<int>(c.xs.size()) - 1;
  c.slabs.resize(nslabs);
  std::vector<int> base(nslabs + 1, 0);
  for (int j = 0; j < nslabs; ++j) {
    const double xm = 0.5 * (c.xs[j] + c.xs[j + 1]);
    std::vector<std::pair<double, int>> order;
    for (int ref = 0; ref < static_cast<int>(c.arc_refs.size()); ++ref) {
      const MonotoneArc& a = arc_of(c, ref);
      if (a.x0 < xm && xm < a.x1) order.emplace_back(arc_y(c, ref, xm), ref);
    }
    std::sort(order.begin(), order.end(), [&](const auto& u, const auto& v) {
      if (u.first != v.first) return u.first < v.first;
      return c.arc_refs[u.second] < c.arc_refs[v.second];
    });
    for (const auto& [y, ref] : order) c.slabs[j].arcs.push_back(ref);
    base[j + 1] = base[j] + static_cast<int>(order.size()) + 1;
  }

  auto key = [&](int j, int g) {
    const auto& arcs = c.slabs[j].arcs;
    return std::make_pair(g == 0 ? kBottom : arcs[g - 1], g == static_cast<int>(arcs.size()) ? kTop : arcs[g]);
  };

  UnionFind uf(base[nslabs]);
  for (int j = 0; j + 1 < nslabs; ++j) {
    const double x = c.xs[j + 1];
    const auto& ys = boundary_ys[j + 1];
    std::map<std::pair<int, int>, int> next;
    for (int g = 0; g <= static_cast<int>(c.slabs[j + 1].arcs.size()); ++g) next.emplace(key(j + 1, g), g);
    for (int g = 0; g <= static_cast<int>(c.slabs[j].arcs.size()); ++g) {
      const auto k = key(j, g);
      const auto it = next.find(k);
      if (it == next.end()) continue;
      const double lo = arc_y(c, k.first, x) - ey, hi = arc_y(c, k.second, x) + ey;
      const auto first = std::lower_bound(ys.begin(), ys.end(), lo);
      if (first != ys.end() && *first <= hi) continue;
      uf.unite(base[j] + g, base[j + 1] + it->second);
    }
  }

  // Number the merged cells in slab order.
  std::vector<int> id_of_root(base[nslabs], -1);
  for (int j = 0; j < nslabs; ++j) {
    auto& slab = c.slabs[j];
    slab.cell_of_gap.resize(slab.arcs.size() + 1);
    for (int g = 0; g <= static_cast<int>(slab.arcs.size()); ++g) {
      const int root = uf.find(base[j] + g);
      if (id_of_root[root] < 0) {
        id_of_root[root] = static_cast<int>(c.cells.size());
        PfCell cell;
        cell.id = id_of_root[root];
        cell.first_slab = j;
        c.cells.push_back(cell);
      }
      const int id = id_of_root[root];
      slab.cell_of_gap[g] = id;
      PfCell& cell = c.cells[id];
      cell.last_slab = j;
      const auto [b, t] = key(j, g);
      const double x0 = c.xs[j], x1 = c.xs[j + 1];
      // x = x0 + w (1 - cos u) / 2 absorbs square-root behaviour at vertical tangents.
      const double hw = 0.5 * (x1 - x0);
      cell.area += boost::math::quadrature::gauss<double, 15>::integrate(
          [&](double u) {
            const double x = std::clamp(x0 + hw * (1.0 - std::cos(u)), x0, x1);
            return (arc_y(c, t, x) - arc_y(c, b, x)) * hw * std::sin(u);
          },
          0.0, M_PI);
    }
  }

  // Boundary descriptors.
  for (PfCell& cell : c.cells) {
    const int g = static_cast<int>(std::find(c.slabs[cell.first_slab].cell_of_gap.begin(),
                                             c.slabs[cell.first_slab].cell_of_gap.end(), cell.id) -
                                   c.slabs[cell.first_slab].cell_of_gap.begin());
    const auto [b, t] = key(cell.first_slab, g);
    const double xl = c.xs[cell.first_slab], xr = c.xs[cell.last_slab + 1];
    cell.bottom_arc = arc_ref(c, b, xl, xr);
    cell.top_arc = arc_ref(c, t, xl, xr);
    auto wall = [&](double x, bool side) -> std::optional<CellWall> {
      const double lo = arc_y(c, b, x), hi = arc_y(c, t, x);
      if (hi - lo <= ey) return std::nullopt;
      return CellWall{x, lo, hi, side};
    };
    cell.left = wall(xl, cell.first_slab == 0);
    cell.right = wall(xr, cell.last_slab == nslabs - 1);
    int pieces = (cell.bottom_arc ? 1 : 0) + (cell.top_arc ? 1 : 0) +
                 (cell.left && !cell.left->viewport_side ? 1 : 0) + (cell.right && !cell.right->viewport_side ? 1 : 0);
    cell.corner_count = pieces >= 2 ? pieces : 0;
  }
  c.crossing_curves.assign(c.cells.size(), {});
  return c;
}

int locate_cell_raw(const Cutting& c, Vec2 p) {
  const int j = slab_index(c, p.x);
  const double x = std::clamp(p.x, c.xs[j], c.xs[j + 1]);
  return c.slabs[j].cell_of_gap[gap_in_slab(c, j, x, p.y)];
}

void compute_crossings(Cutting& c) {
  c.crossing_curves.assign(c.cells.size(), {});
  for (int id = 0; id < c.n; ++id) {
    if (c.in_sample[id]) continue;
    const PreparedCurve& pc = (*c.curves)[id];
    std::vector<char> hit(c.cells.size(), 0);
    auto locate_t = [&](double t) { return locate_cell_raw(c, pc.curve.point(t)); };
    auto split = [&](auto&& self, double ta, int ca, double tb, int cb) -> void {
      if (tb - ta <= 1e-10 * std::max(1.0, std::abs(ta))) return;
      const double tm = 0.5 * (ta + tb);
      const int cm = locate_t(tm);
      hit[cm] = 1;
      if (cm != ca) self(self, ta, ca, tm, cm);
      if (cm != cb) self(self, tm, cm, tb, cb);
    };
    for (const auto& comp : pc.trace.components) {
      int prev = -1;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        const int cell = locate_cell_raw(c, comp[i].p);
        hit[cell] = 1;
        if (i > 0 && cell != prev) split(split, comp[i - 1].t, prev, comp[i].t, cell);
        prev = cell;
      }
    }
    for (std::size_t k = 0; k < hit.size(); ++k)
      if (hit[k]) c.crossing_curves[k].push_back(id);
  }
}

std::size_t cell_crossings(const Cutting& c, int cell) { return c.crossing_curves.at(cell).size(); }

Cutting build_cutting(std::shared_ptr<const std::vector<PreparedCurve>> curves, int r, std::uint64_t seed,
                      const CuttingOptions& opts) {
  const int n = static_cast<int>(curves->size());
  if (n < 2 || r < 1 || r >= n) throw InvalidArgument("cutting needs 1 <= r < n");
  const int s = sample_size(n, r);
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    const std::uint64_t seed_a = seed + static_cast<std::uint64_t>(attempt);
    auto sample = sample_curves(n, s, seed_a);
    auto rays = build_rays(*curves, sample, curves->front().trace.bbox, opts.tol);
    Cutting c = build_cells(curves, std::move(sample), std::move(rays), curves->front().trace.bbox);
    compute_crossings(c);
    if (static_cast<double>(c.max_crossings()) * r <= static_cast<double>(n)) {
      c.r = r;
      c.s = s;
      c.seed = seed;
      c.retries_used = attempt;
      return c;
    }
  }
  throw CuttingFailed("no certified cutting after " + std::to_string(opts.max_retries) + " retries");
}

Location locate_point(const Cutting& c, Vec2 p, double tol) {
  const double ex = x_eps(c.viewport);
  std::vector<int> slabs;
  const int j = slab_index(c, p.x);
  if (j > 0 && std::abs(p.x - c.xs[j]) <= ex) slabs = {j - 1, j};
  else if (j + 1 < static_cast<int>(c.slabs.size()) && std::abs(p.x - c.xs[j + 1]) <= ex) slabs = {j, j + 1};
  else slabs = {j};

  std::vector<int> on;
  for (int id : c.sample)
    if (closest_point((*c.curves)[id], p, 100.0 * tol).distance <= tol) on.push_back(id);

  Location loc;
  std::set<int> cells;
  for (int k : slabs) {
    const double x = std::clamp(p.x, c.xs[k], c.xs[k + 1]);
    const auto& arcs = c.slabs[k].arcs;
    if (on.empty()) {
      cells.insert(c.slabs[k].cell_of_gap[gap_in_slab(c, k, x, p.y)]);
      continue;
    }
    for (int id : on) {
      int best = -1;
      double best_d = 0.0;
      for (int g = 0; g < static_cast<int>(arcs.size()); ++g) {
        if (c.arc_refs[arcs[g]].first != id) continue;
        const double d = std::abs(arc_y(c, arcs[g], x) - p.y);
        if (best < 0 || d < best_d) {
          best = g;
          best_d = d;
        }
      }
      if (best < 0) continue;
      cells.insert(c.slabs[k].cell_of_gap[best]);
      cells.insert(c.slabs[k].cell_of_gap[best + 1]);
    }
  }
  if (cells.empty()) cells.insert(locate_cell_raw(c, p));
  loc.cells.assign(cells.begin(), cells.end());
  loc.boundary = !on.empty() || loc.cells.size() > 1;
  return loc;
}

double total_cell_area(const Cutting& c) {
  double a = 0.0;
  for (const auto& cell : c.cells) a += cell.area;
  return a;
}

std::string cutting_to_json(const Cutting& c) {
  json j;
  j["format_version"] = kFormatVersion;
  j["r"] = c.r;
  j["s"] = c.s;
  j["seed"] = c.seed;
  j["retries_used"] = c.retries_used;
  j["n"] = c.n;
  j["viewport"] = {c.viewport.xmin, c.viewport.xmax, c.viewport.ymin, c.viewport.ymax};
  j["sample"] = c.sample;
  j["rays"] = json::array();
  for (const auto& ray : c.rays)
    j["rays"].push_back({{"origin", {ray.origin.x, ray.origin.y}},
                         {"direction", ray.up ? "up" : "down"},
                         {"y_end", ray.y_end},
                         {"stopped_by", ray.stopped_by}});
  j["cells"] = json::array();
  for (const auto& cell : c.cells)
    j["cells"].push_back({{"id", cell.id},
                          {"bottom", arc_json(cell.bottom_arc)},
                          {"top", arc_json(cell.top_arc)},
                          {"left", wall_json(cell.left)},
                          {"right", wall_json(cell.right)},
                          {"corners", cell.corner_count},
                          {"area", cell.area},
                          {"crossings", c.crossing_curves.empty() ? 0 : c.crossing_curves[cell.id].size()}});
  return j.dump(1);
}

std::string cutting_crossings_csv(const Cutting& c) {
  std::ostringstream os;
  os.precision(17);
  os << "cell,crossings,corners,area\n";
  for (const auto& cell : c.cells)
    os << cell.id << ',' << (c.crossing_curves.empty() ? 0 : c.crossing_curves[cell.id].size()) << ','
       << cell.corner_count << ',' << cell.area << '\n';
  return os.str();
}

std::string cutting_to_svg(const Cutting& c) {
  const Rect& vp = c.viewport;
  const double w = 800.0, h = w * vp.height() / vp.width();
  auto sx = [&](double x) { return (x - vp.xmin) / vp.width() * w; };
  auto sy = [&](double y) { return h - (y - vp.ymin) / vp.height() * h; };
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\" stroke=\"black\"/>\n";
  for (int id = 0; id < c.n; ++id) {
    const auto& pc = (*c.curves)[id];
    const char* style = c.in_sample[id] ? "stroke=\"black\" stroke-width=\"1.5\"" : "stroke=\"#bbbbbb\" stroke-width=\"0.7\"";
    for (const auto& comp : pc.trace.components) {
      os << "<polyline fill=\"none\" " << style << " points=\"";
      const std::size_t stride = std::max<std::size_t>(1, comp.size() / 2000);
      for (std::size_t i = 0; i < comp.size(); i += stride) os << sx(comp[i].p.x) << ',' << sy(comp[i].p.y) << ' ';
      os << sx(comp.back().p.x) << ',' << sy(comp.back().p.y) << "\"/>\n";
    }
  }
  for (const auto& ray : c.rays)
    os << "<line x1=\"" << sx(ray.origin.x) << "\" y1=\"" << sy(ray.origin.y) << "\" x2=\"" << sx(ray.origin.x)
       << "\" y2=\"" << sy(ray.y_end) << "\" stroke=\"red\" stroke-width=\"0.6\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace pfaffinc
