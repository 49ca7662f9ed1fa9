#include "pfaffinc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <boost/math/tools/roots.hpp>

#include "pfaffinc/errors.hpp"
#include "pfaffinc/incidence.hpp"
#include "pfaffinc/trace.hpp"

namespace pfaffinc {

namespace {

double signed_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution neg(0.5);
  const double v = mag(rng);
  return neg(rng) ? -v : v;
}

PfaffianCurve random_curve(CurveKind kind, std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  switch (kind) {
    case CurveKind::Line: return catalog::line(u(-2, 2), u(-1, 1));
    case CurveKind::Circle: return catalog::circle(u(-1.5, 1.5), u(-1.5, 1.5), u(0.3, 1.5));
    case CurveKind::Parabola: return catalog::parabola(signed_uniform(rng, 0.2, 1.0), u(-1, 1), u(-1.5, 1));
    case CurveKind::Exp: return catalog::exp(signed_uniform(rng, 0.2, 1.5), signed_uniform(rng, 0.3, 1.5), u(-1, 1));
    case CurveKind::Log: return catalog::log(signed_uniform(rng, 0.3, 2.0), u(-1, 1));
    case CurveKind::Tan: return catalog::tan(u(0.3, 1.5), u(-1, 1), 0);
    case CurveKind::Arctan: return catalog::arctan(u(-1.5, 1.5));
    case CurveKind::Reciprocal: return catalog::reciprocal(u(0.2, 2.0), std::bernoulli_distribution(0.5)(rng));
    case CurveKind::ExpOfPoly: return catalog::exp_of_poly(Poly1{u(-1, 0.5), u(-1, 1), u(-0.5, 0.5)});
    case CurveKind::ReciprocalRoot: return catalog::reciprocal_root(std::uniform_int_distribution<int>(1, 3)(rng));
    case CurveKind::Composed: break;
  }
  throw InvalidArgument("random_scene cannot draw composed curves");
}

// Uniform point on the trace, evaluated from the closed form.
std::optional<Vec2> point_on(const PfaffianCurve& c, const CurveTrace& tr, const Rect& vp, std::mt19937_64& rng) {
  std::vector<double> weights;
  for (const auto& comp : tr.components) weights.push_back(comp.size() > 1 ? double(comp.size() - 1) : 0.0);
  if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; })) return std::nullopt;
  std::discrete_distribution<std::size_t> pick_comp(weights.begin(), weights.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const auto& comp = tr.components[pick_comp(rng)];
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, comp.size() - 2)(rng);
    const double t = comp[i].t + unit(rng) * (comp[i + 1].t - comp[i].t);
    const Vec2 p = c.point(t);
    if (vp.contains(p)) return p;
  }
  return std::nullopt;
}

// Root of g on [lo, hi] near a sign change found by scanning, if any.
std::optional<double> scan_root(const std::function<double(double)>& g, double lo, double hi, std::mt19937_64& rng) {
  constexpr int kSamples = 128;
  std::vector<std::pair<double, double>> brackets;
  double prev_x = lo, prev = g(lo);
  for (int k = 1; k <= kSamples; ++k) {
    const double x = lo + (hi - lo) * k / kSamples, v = g(x);
    if (!std::isfinite(v) || !std::isfinite(prev)) {
      prev_x = x;
      prev = v;
      continue;
    }
    if (prev == 0.0) return prev_x;
    if ((prev < 0.0) != (v < 0.0)) brackets.emplace_back(prev_x, x);
    prev_x = x;
    prev = v;
  }
  if (brackets.empty()) return std::nullopt;
  const auto [a, b] = brackets[std::uniform_int_distribution<std::size_t>(0, brackets.size() - 1)(rng)];
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, a, b, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

Scene grid_lines(int a, int b) {
  if (a < 1 || b < 1) throw InvalidArgument("grid_lines needs a, b >= 1");
  Scene s;
  s.viewport = {-0.5, a - 0.5, -0.5, 2.0 * a * b - 0.5};
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < 2 * a * b; ++y) s.points.push_back({double(x), double(y)});
  for (int sl = 0; sl < b; ++sl)
    for (int t = 0; t < a * b; ++t) s.curves.push_back(catalog::line(sl, t));
  return s;
}

Scene exp_transform(const Scene& scene) {
  Scene out;
  out.step = scene.step;
  out.viewport = {std::exp(scene.viewport.xmin), std::exp(scene.viewport.xmax), scene.viewport.ymin,
                  scene.viewport.ymax};
  for (const Vec2 p : scene.points) out.points.push_back({std::exp(p.x), p.y});
  for (const auto& c : scene.curves) {
    if (c.kind() != CurveKind::Line || !c.transform().is_identity())
      throw InvalidArgument("exp_transform maps lines only");
    out.curves.push_back(catalog::log(c.params()[0], c.params()[1]));
  }
  return out;
}

std::vector<Vec2> unit_circle_intersections(Vec2 c1, Vec2 c2) {
  const Vec2 d = c2 - c1;
  const double L = norm(d);
  if (L == 0.0 || L > 2.0 + 1e-12) return {};
  const Vec2 mid = c1 + 0.5 * d;
  if (std::abs(L - 2.0) <= 1e-12) return {mid};
  const double h = std::sqrt(1.0 - L * L / 4.0);
  const Vec2 perp{-d.y / L, d.x / L};
  return {mid + h * perp, mid - h * perp};
}

Scene unit_circles(int m, int n, std::uint64_t seed, const UnitCircleOptions& opts) {
  if (m < 0 || n < 0) throw InvalidArgument("unit_circles needs m, n >= 0");
  if (!(opts.planted >= 0.0 && opts.planted <= 1.0)) throw InvalidArgument("planted fraction must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  const double side = opts.spread > 0.0 ? opts.spread : std::max(1.0, std::sqrt(double(n)));
  std::uniform_real_distribution<double> uc(0.0, side), uv(-1.5, side + 1.5);
  Scene s;
  s.viewport = {-1.5, side + 1.5, -1.5, side + 1.5};
  std::vector<Vec2> centres;
  for (int i = 0; i < n; ++i) {
    centres.push_back({uc(rng), uc(rng)});
    s.curves.push_back(catalog::circle(centres.back().x, centres.back().y, 1.0));
  }
  const int planted = static_cast<int>(std::lround(opts.planted * m));
  std::set<std::tuple<int, int, int>> used;
  for (int k = 0; k < planted; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && n >= 2 && !placed; ++attempt) {
      std::uniform_int_distribution<int> pick(0, n - 1);
      int i = pick(rng), j = pick(rng);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      const auto pts = unit_circle_intersections(centres[i], centres[j]);
      if (pts.empty()) continue;
      const int w = std::uniform_int_distribution<int>(0, static_cast<int>(pts.size()) - 1)(rng);
      if (!used.insert({i, j, w}).second) continue;
      s.points.push_back(pts[w]);
      placed = true;
    }
    if (!placed) s.points.push_back({uv(rng), uv(rng)});
  }
  while (static_cast<int>(s.points.size()) < m) s.points.push_back({uv(rng), uv(rng)});
  return s;
}

std::vector<CurveKind> default_random_kinds() {
  return {CurveKind::Line, CurveKind::Circle, CurveKind::Parabola, CurveKind::Exp,
          CurveKind::Log,  CurveKind::Tan,    CurveKind::Arctan,   CurveKind::Reciprocal};
}

Scene random_scene(std::span<const CurveKind> kinds, int m, int n, double planted, std::uint64_t seed,
                   const Rect& viewport) {
  if (kinds.empty()) throw InvalidArgument("random_scene needs at least one curve kind");
  if (m < 0 || n < 0) throw InvalidArgument("random_scene needs m, n >= 0");
  if (!(planted >= 0.0 && planted <= 1.0)) throw InvalidArgument("planted fraction must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  Scene s;
  s.viewport = viewport;
  std::set<std::vector<long long>> seen;
  std::vector<CurveTrace> traces;
  std::uniform_int_distribution<std::size_t> pick_kind(0, kinds.size() - 1);
  int failures = 0;
  while (static_cast<int>(s.curves.size()) < n) {
    if (++failures > 100 * (n + 10)) throw InvalidArgument("could not draw enough visible curves");
    const CurveKind kind = kinds[pick_kind(rng)];
    PfaffianCurve c = random_curve(kind, rng);
    std::vector<long long> key{static_cast<long long>(kind)};
    for (double p : c.params()) key.push_back(std::llround(p * 1e9));
    if (seen.count(key)) continue;
    try {
      CurveTrace tr = trace_curve(c, viewport, s.step);
      if (tr.sample_count() < 2) continue;
      traces.push_back(std::move(tr));
    } catch (const EmptyTrace&) {
      continue;
    }
    seen.insert(key);
    s.curves.push_back(std::move(c));
  }
  std::uniform_real_distribution<double> ux(viewport.xmin, viewport.xmax), uy(viewport.ymin, viewport.ymax);
  const int on = n > 0 ? static_cast<int>(std::lround(planted * m)) : 0;
  for (int k = 0; k < m; ++k) {
    std::optional<Vec2> p;
    if (k < on)
      for (int attempt = 0; attempt < 20 && !p; ++attempt) {
        const std::size_t id = std::uniform_int_distribution<std::size_t>(0, s.curves.size() - 1)(rng);
        p = point_on(s.curves[id], traces[id], viewport, rng);
      }
    if (!p) p = Vec2{ux(rng), uy(rng)};
    s.points.push_back(*p);
  }
  return s;
}

FamilyScene random_family_scene(const PfaffianFamily& family, int m, int n, std::uint64_t seed) {
  if (m < 0 || n < 0) throw InvalidArgument("random_family_scene needs m, n >= 0");
  const int d = family.dimension();
  const Rect& U = family.domain;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(U.xmin, U.xmax), uy(U.ymin, U.ymax);
  std::normal_distribution<double> gauss;
  FamilyScene out{family, {}, {}};

  const int anchors = (m + 1) / 2;
  while (static_cast<int>(out.points.size()) < anchors) {
    const Vec2 p{ux(rng), uy(rng)};
    const Eigen::VectorXd v = family.eval(p);
    if (v.allFinite() && v.cwiseAbs().maxCoeff() > 0.0) out.points.push_back(p);
  }

  const int through = std::min(d - 1, 2);
  int failures = 0;
  while (static_cast<int>(out.curves.size()) < n) {
    if (++failures > 1000 * (n + 10)) throw InvalidArgument("could not draw enough distinct family curves");
    Eigen::VectorXd g(d);
    for (int k = 0; k < d; ++k) g[k] = gauss(rng);
    if (anchors >= through && through > 0) {
      Eigen::MatrixXd M(d, through);
      std::set<int> chosen;
      std::uniform_int_distribution<int> pick(0, anchors - 1);
      while (static_cast<int>(chosen.size()) < through) chosen.insert(pick(rng));
      int col = 0;
      for (int id : chosen) M.col(col++) = family.eval(out.points[id]);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
      const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, through);
      for (int pass = 0; pass < 2; ++pass) g -= Q * (Q.transpose() * g);
    }
    if (!(g.norm() > 1e-6)) continue;
    FamilyCurve c = make_family_curve(g);
    bool dup = false;
    for (const auto& o : out.curves)
      if ((o.coeffs - c.coeffs).cwiseAbs().maxCoeff() <= 1e-9) dup = true;
    if (!dup) out.curves.push_back(std::move(c));
  }

  failures = 0;
  while (static_cast<int>(out.points.size()) < m && n > 0) {
    if (++failures > 1000 * (m + 10)) throw InvalidArgument("could not place points on family curves");
    const auto& a = out.curves[std::uniform_int_distribution<int>(0, n - 1)(rng)].coeffs;
    std::optional<Vec2> p;
    if (std::bernoulli_distribution(0.5)(rng)) {
      const double x = ux(rng);
      if (auto y = scan_root([&](double y) { return family.f(a, {x, y}); }, U.ymin, U.ymax, rng)) p = Vec2{x, *y};
    } else {
      const double y = uy(rng);
      if (auto x = scan_root([&](double x) { return family.f(a, {x, y}); }, U.xmin, U.xmax, rng)) p = Vec2{*x, y};
    }
    if (p && U.contains(*p)) out.points.push_back(*p);
  }
  while (static_cast<int>(out.points.size()) < m) out.points.push_back({ux(rng), uy(rng)});
  return out;
}

std::pair<int, int> grid_shape(int N) {
  if (N < 1) throw InvalidArgument("sweep size must be positive");
  const int a = std::max(1, static_cast<int>(std::lround(std::cbrt(double(N)))));
  const int b = std::max(1, static_cast<int>(std::lround(std::sqrt(double(N) / a))));
  return {a, b};
}

std::vector<SweepRow> grid_sweep(std::span<const int> sizes, bool exp_image, double tol) {
  std::vector<SweepRow> rows;
  for (int N : sizes) {
    const auto [a, b] = grid_shape(N);
    Scene s = grid_lines(a, b);
    if (exp_image) s = exp_transform(s);
    SweepRow r{N, a, b, static_cast<int>(s.points.size()), static_cast<int>(s.curves.size()), 0};
    r.incidences = static_cast<std::int64_t>(count_incidences(s, tol).size());
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pfaffinc
