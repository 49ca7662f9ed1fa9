#include "pfaffinc/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pfaffinc/errors.hpp"
#include "pfaffinc/version.hpp"

namespace pfaffinc {

namespace {

using nlohmann::json;

json poly_json(const Poly2& p) {
  json j = json::object();
  for (const auto& [e, c] : p.terms()) j[std::to_string(e.first) + "," + std::to_string(e.second)] = c;
  return j;
}

Poly2 poly_from(const json& j) {
  if (!j.is_object()) throw FormatError("term argument must be an exponent -> coefficient object");
  Poly2 p;
  for (const auto& [k, v] : j.items()) {
    int i = 0, e = 0;
    char comma = 0;
    std::istringstream ss(k);
    if (!(ss >> i >> comma >> e) || comma != ',' || i < 0 || e < 0) throw FormatError("bad exponent key '" + k + "'");
    p.add_term(i, e, v.get<double>());
  }
  return p;
}

json term_json(const FamilyTerm& t) {
  switch (t.kind) {
    case FamilyTerm::Kind::Monomial: return {{"monomial", {t.i, t.j}}};
    case FamilyTerm::Kind::Exp: return {{"exp", poly_json(t.arg)}};
    case FamilyTerm::Kind::Log: return {{"log", poly_json(t.arg)}};
  }
  return nullptr;
}

FamilyTerm term_from(const json& j) {
  if (!j.is_object() || j.size() != 1) throw FormatError("a term is an object with one key");
  if (j.contains("monomial")) {
    const auto& e = j.at("monomial");
    if (!e.is_array() || e.size() != 2) throw FormatError("monomial needs [i, j]");
    const int i = e[0].get<int>(), k = e[1].get<int>();
    if (i < 0 || k < 0) throw FormatError("monomial exponents must be nonnegative");
    return FamilyTerm::monomial(i, k);
  }
  if (j.contains("exp")) return FamilyTerm::exp(poly_from(j.at("exp")));
  if (j.contains("log")) return FamilyTerm::log(poly_from(j.at("log")));
  throw FormatError("unknown term " + j.dump());
}

json family_json(const PfaffianFamily& f) {
  json j;
  j["terms"] = json::array();
  for (const auto& t : f.terms) j["terms"].push_back(term_json(t));
  j["U"] = {f.domain.xmin, f.domain.xmax, f.domain.ymin, f.domain.ymax};
  return j;
}

PfaffianFamily family_from(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j.contains("U")) throw FormatError("family needs terms and U");
  std::vector<FamilyTerm> terms;
  for (const auto& t : j.at("terms")) terms.push_back(term_from(t));
  const auto& u = j.at("U");
  if (!u.is_array() || u.size() != 4) throw FormatError("U must be [xmin, xmax, ymin, ymax]");
  return make_family(std::move(terms), Rect{u[0].get<double>(), u[1].get<double>(), u[2].get<double>(),
                                            u[3].get<double>()});
}

Vec2 term_gradient(const FamilyTerm& t, double x, double y) {
  switch (t.kind) {
    case FamilyTerm::Kind::Monomial: {
      const double gx = t.i == 0 ? 0.0 : t.i * std::pow(x, t.i - 1) * std::pow(y, t.j);
      const double gy = t.j == 0 ? 0.0 : t.j * std::pow(x, t.i) * std::pow(y, t.j - 1);
      return {gx, gy};
    }
    case FamilyTerm::Kind::Exp: {
      const double e = std::exp(t.arg(x, y));
      return {e * t.arg.dx()(x, y), e * t.arg.dy()(x, y)};
    }
    case FamilyTerm::Kind::Log: {
      const double v = t.arg(x, y);
      return {t.arg.dx()(x, y) / v, t.arg.dy()(x, y) / v};
    }
  }
  return {};
}

Vec2 lerp_zero(Vec2 a, double fa, Vec2 b, double fb) {
  const double u = fa / (fa - fb);
  return a + u * (b - a);
}

// Segments of one cell with corners c00, c10, c11, c01.
void cell_segments(const Vec2 c[4], const double v[4], double centre, std::vector<Segment>& out) {
  auto pos = [](double x) { return x >= 0.0; };
  // Edge k joins corner k and corner k+1 (mod 4): bottom, right, top, left.
  Vec2 e[4];
  bool cut[4];
  int ncut = 0;
  for (int k = 0; k < 4; ++k) {
    const int l = (k + 1) % 4;
    cut[k] = pos(v[k]) != pos(v[l]);
    if (cut[k]) {
      e[k] = lerp_zero(c[k], v[k], c[l], v[l]);
      ++ncut;
    }
  }
  if (ncut == 2) {
    int a = -1, b = -1;
    for (int k = 0; k < 4; ++k)
      if (cut[k]) (a < 0 ? a : b) = k;
    out.push_back({e[a], e[b]});
  } else if (ncut == 4) {
    // Corner k touches edges k - 1 and k; cut off the corners unlike the centre.
    for (int k = 0; k < 4; ++k)
      if (pos(v[k]) != pos(centre)) out.push_back({e[(k + 3) % 4], e[k]});
  }
}

bool generic(const DualConfig& c) {
  for (const auto& z : c.points)
    if (!(std::abs(z[0]) > 1e-9 * z.norm())) return false;
  for (const auto& p : c.planes) {
    const double nn = p.normal.norm();
    if (!(std::abs(p.normal[0]) > 1e-9 * nn)) return false;
    if (!(p.normal.tail(p.normal.size() - 1).norm() > 1e-9 * nn)) return false;
  }
  return true;
}

DualConfig rotate(const DualConfig& c, const Eigen::MatrixXd& q) {
  DualConfig out;
  for (const auto& z : c.points) out.points.push_back(q * z);
  for (const auto& p : c.planes) out.planes.push_back({q * p.normal});
  return out;
}

}  // namespace

FamilyTerm FamilyTerm::monomial(int i, int j) {
  if (i < 0 || j < 0) throw InvalidArgument("monomial exponents must be nonnegative");
  FamilyTerm t;
  t.i = i;
  t.j = j;
  return t;
}

FamilyTerm FamilyTerm::exp(Poly2 arg) {
  FamilyTerm t;
  t.kind = Kind::Exp;
  t.arg = std::move(arg);
  return t;
}

FamilyTerm FamilyTerm::log(Poly2 arg) {
  FamilyTerm t;
  t.kind = Kind::Log;
  t.arg = std::move(arg);
  return t;
}

double FamilyTerm::operator()(double x, double y) const {
  switch (kind) {
    case Kind::Monomial: return std::pow(x, i) * std::pow(y, j);
    case Kind::Exp: return std::exp(arg(x, y));
    case Kind::Log: return std::log(arg(x, y));
  }
  return 0.0;
}

std::string FamilyTerm::to_string() const {
  switch (kind) {
    case Kind::Monomial: {
      if (i == 0 && j == 0) return "1";
      std::string s;
      if (i > 0) s += i == 1 ? "x" : "x^" + std::to_string(i);
      if (j > 0) s += (s.empty() ? "" : "*") + std::string(j == 1 ? "y" : "y^" + std::to_string(j));
      return s;
    }
    case Kind::Exp: return "exp(" + arg.to_string() + ")";
    case Kind::Log: return "log(" + arg.to_string() + ")";
  }
  return "";
}

Eigen::VectorXd PfaffianFamily::eval(Vec2 p) const {
  Eigen::VectorXd m(dimension());
  for (int k = 0; k < dimension(); ++k) m[k] = terms[k](p.x, p.y);
  return m;
}

double PfaffianFamily::f(const Eigen::VectorXd& a, Vec2 p) const { return a.dot(eval(p)); }

PfaffianFamily make_family(std::vector<FamilyTerm> terms, const Rect& domain) {
  if (terms.size() < 2) throw InvalidArgument("a family needs at least two terms");
  if (!domain.valid() || !std::isfinite(domain.area())) throw InvalidArgument("family domain must be a bounded rectangle");
  return PfaffianFamily{std::move(terms), domain};
}

namespace families {
PfaffianFamily lines(const Rect& U) {
  return make_family({FamilyTerm::monomial(0, 0), FamilyTerm::monomial(1, 0), FamilyTerm::monomial(0, 1)}, U);
}
PfaffianFamily exp_graphs(const Rect& U) {
  return make_family({FamilyTerm::monomial(0, 0), FamilyTerm::monomial(0, 1), FamilyTerm::exp(Poly2::x())}, U);
}
PfaffianFamily parabolas(const Rect& U) {
  return make_family({FamilyTerm::monomial(0, 0), FamilyTerm::monomial(1, 0), FamilyTerm::monomial(2, 0),
                      FamilyTerm::monomial(0, 1)},
                     U);
}
PfaffianFamily exp_lines(const Rect& U) {
  return make_family({FamilyTerm::monomial(0, 0), FamilyTerm::monomial(1, 0), FamilyTerm::monomial(0, 1),
                      FamilyTerm::exp(Poly2::x())},
                     U);
}
PfaffianFamily log_graphs(const Rect& U) {
  if (!(U.xmin > 0.0)) throw InvalidArgument("log family needs U inside x > 0");
  return make_family({FamilyTerm::monomial(0, 0), FamilyTerm::monomial(1, 0), FamilyTerm::monomial(0, 1),
                      FamilyTerm::log(Poly2::x())},
                     U);
}
}  // namespace families

FamilyCurve make_family_curve(const Eigen::VectorXd& a) {
  const double nrm = a.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InvalidArgument("family curve needs a nonzero finite coefficient vector");
  Eigen::VectorXd u = std::abs(nrm - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? a : Eigen::VectorXd(a / nrm);
  for (Eigen::Index k = 0; k < u.size(); ++k)
    if (u[k] != 0.0) {
      if (u[k] < 0.0) u = -u;
      break;
    }
  return FamilyCurve{u};
}

void check_distinct(std::span<const FamilyCurve> curves) {
  for (std::size_t a = 0; a < curves.size(); ++a)
    for (std::size_t b = a + 1; b < curves.size(); ++b)
      if (curves[a].coeffs.size() == curves[b].coeffs.size() &&
          (curves[a].coeffs - curves[b].coeffs).cwiseAbs().maxCoeff() <= 1e-12)
        throw DuplicateCurve("curves " + std::to_string(a) + " and " + std::to_string(b) + " are proportional");
}

Eigen::VectorXd dual_point(const FamilyCurve& curve) { return curve.coeffs; }

OriginHyperplane dual_hyperplane(const PfaffianFamily& family, Vec2 p) {
  if (!family.domain.contains(p)) throw DomainViolation("point outside the family domain");
  Eigen::VectorXd n = family.eval(p);
  if (!n.allFinite()) throw DomainViolation("a family term is undefined at the point");
  if (n.cwiseAbs().maxCoeff() == 0.0) throw DegenerateDual("every term vanishes at the point");
  return {std::move(n)};
}

RotatedConfig generic_rotation(const DualConfig& config, std::uint64_t seed) {
  int d = 0;
  if (!config.points.empty()) d = static_cast<int>(config.points.front().size());
  else if (!config.planes.empty()) d = static_cast<int>(config.planes.front().normal.size());
  if (generic(config)) return {config, Eigen::MatrixXd::Identity(d, d), 0};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int attempt = 1; attempt <= 100; ++attempt) {
    Eigen::MatrixXd g(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) g(r, c) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd& rr = qr.matrixQR();
    for (int k = 0; k < d; ++k)
      if (rr(k, k) < 0.0) q.col(k) = -q.col(k);
    DualConfig rotated = rotate(config, q);
    if (generic(rotated)) return {std::move(rotated), q, attempt};
  }
  throw RotationFailed("no generic rotation in 100 draws");
}

ProjectedConfig project_to_pi(const DualConfig& config) {
  ProjectedConfig out;
  for (const auto& z : config.points) {
    const Eigen::Index d = z.size();
    out.points.push_back(z.tail(d - 1) / z[0]);
  }
  for (const auto& p : config.planes) {
    const Eigen::Index d = p.normal.size();
    out.planes.push_back({p.normal.tail(d - 1), -p.normal[0]});
  }
  return out;
}

IncidenceGraph count_dual_incidences(std::span<const Eigen::VectorXd> points, std::span<const OriginHyperplane> planes,
                                     double tol) {
  IncidenceGraph g;
  g.m = static_cast<int>(points.size());
  g.n = static_cast<int>(planes.size());
  for (int i = 0; i < g.m; ++i)
    for (int k = 0; k < g.n; ++k) {
      const auto& n = planes[k].normal;
      if (std::abs(n.dot(points[i])) <= tol * n.norm() * points[i].norm()) g.edges.emplace_back(i, k);
    }
  return g;
}

IncidenceGraph count_hyperplane_incidences(std::span<const Eigen::VectorXd> points,
                                           std::span<const AffineHyperplane> planes, double tol) {
  IncidenceGraph g;
  g.m = static_cast<int>(points.size());
  g.n = static_cast<int>(planes.size());
  for (int i = 0; i < g.m; ++i) {
    const double px = std::sqrt(1.0 + points[i].squaredNorm());
    for (int k = 0; k < g.n; ++k) {
      const auto& h = planes[k];
      const double scale = std::sqrt(h.normal.squaredNorm() + h.offset * h.offset) * px;
      if (std::abs(h.normal.dot(points[i]) - h.offset) <= tol * scale) g.edges.emplace_back(i, k);
    }
  }
  return g;
}

std::vector<Segment> marching_squares(const std::function<double(Vec2)>& f, const Rect& box, int nx, int ny) {
  if (nx < 1 || ny < 1 || !box.valid()) throw InvalidArgument("marching squares needs a valid grid");
  const double hx = box.width() / nx, hy = box.height() / ny;
  std::vector<double> row0(nx + 1), row1(nx + 1);
  for (int i = 0; i <= nx; ++i) row0[i] = f({box.xmin + i * hx, box.ymin});
  std::vector<Segment> out;
  for (int j = 0; j < ny; ++j) {
    const double y0 = box.ymin + j * hy, y1 = box.ymin + (j + 1) * hy;
    for (int i = 0; i <= nx; ++i) row1[i] = f({box.xmin + i * hx, y1});
    for (int i = 0; i < nx; ++i) {
      const double x0 = box.xmin + i * hx, x1 = box.xmin + (i + 1) * hx;
      const Vec2 c[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
      const double v[4] = {row0[i], row0[i + 1], row1[i + 1], row1[i]};
      const bool all = (v[0] >= 0) == (v[1] >= 0) && (v[1] >= 0) == (v[2] >= 0) && (v[2] >= 0) == (v[3] >= 0);
      if (all) continue;
      cell_segments(c, v, f({0.5 * (x0 + x1), 0.5 * (y0 + y1)}), out);
    }
    std::swap(row0, row1);
  }
  return out;
}

IncidenceGraph count_family_incidences(std::span<const Vec2> points, const PfaffianFamily& family,
                                       std::span<const FamilyCurve> curves, const FamilyCountOptions& opts) {
  if (opts.grid < 2 || !(opts.tol > 0.0)) throw InvalidArgument("bad family count options");
  const Rect& U = family.domain;
  const int N = opts.grid;
  const double hx = U.width() / N, hy = U.height() / N;
  const double reach = 1.5 * std::max(hx, hy);
  IncidenceGraph g;
  g.m = static_cast<int>(points.size());
  g.n = static_cast<int>(curves.size());
  for (int pi = 0; pi < g.m; ++pi) {
    const Vec2 p = points[pi];
    if (!U.contains(p)) throw DomainViolation("point outside the family domain");
    const int ci = std::clamp(static_cast<int>(std::floor((p.x - U.xmin) / hx)), 0, N - 1);
    const int cj = std::clamp(static_cast<int>(std::floor((p.y - U.ymin) / hy)), 0, N - 1);
    const int i0 = std::max(0, ci - 1), i1 = std::min(N, ci + 2);
    const int j0 = std::max(0, cj - 1), j1 = std::min(N, cj + 2);
    // Term values at the nodes and cell centres of the 3 x 3 block around p.
    auto node = [&](int i, int j) { return Vec2{U.xmin + i * hx, U.ymin + j * hy}; };
    std::vector<Eigen::VectorXd> nodes, centres;
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) nodes.push_back(family.eval(node(i, j)));
    for (int j = j0; j < j1; ++j)
      for (int i = i0; i < i1; ++i) centres.push_back(family.eval(node(i, j) + Vec2{0.5 * hx, 0.5 * hy}));
    const int w = i1 - i0 + 1;
    const Eigen::VectorXd mp = family.eval(p);
    Eigen::MatrixXd grad(family.dimension(), 2);
    for (int k = 0; k < family.dimension(); ++k) {
      const Vec2 gk = term_gradient(family.terms[k], p.x, p.y);
      grad(k, 0) = gk.x;
      grad(k, 1) = gk.y;
    }
    for (int ci2 = 0; ci2 < g.n; ++ci2) {
      const Eigen::VectorXd& a = curves[ci2].coeffs;
      std::vector<Segment> segs;
      for (int j = j0; j < j1; ++j)
        for (int i = i0; i < i1; ++i) {
          const int b = (j - j0) * w + (i - i0);
          const Vec2 c[4] = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
          const double v[4] = {a.dot(nodes[b]), a.dot(nodes[b + 1]), a.dot(nodes[b + w + 1]), a.dot(nodes[b + w])};
          cell_segments(c, v, a.dot(centres[(j - j0) * (i1 - i0) + (i - i0)]), segs);
        }
      bool near = false;
      for (const auto& s : segs)
        if (segment_distance(p, s.a, s.b) <= reach) {
          near = true;
          break;
        }
      if (!near) continue;
      const double fp = a.dot(mp);
      const Eigen::Vector2d gp = grad.transpose() * a;
      if (std::abs(fp) <= opts.tol * std::max(gp.norm(), 1e-12)) g.edges.emplace_back(pi, ci2);
    }
  }
  return g;
}

DualityReport verify_duality_chain(std::span<const Vec2> points, const PfaffianFamily& family,
                                   std::span<const FamilyCurve> curves, std::uint64_t seed,
                                   const FamilyCountOptions& opts) {
  check_distinct(curves);
  for (const auto& c : curves)
    if (c.coeffs.size() != family.dimension()) throw InvalidArgument("coefficient vector does not match the family");
  DualityReport rep;
  const IncidenceGraph primal = count_family_incidences(points, family, curves, opts);

  DualConfig dual;
  for (const auto& c : curves) dual.points.push_back(dual_point(c));
  for (const Vec2 p : points) dual.planes.push_back(dual_hyperplane(family, p));
  const IncidenceGraph star = count_dual_incidences(dual.points, dual.planes);

  const RotatedConfig rot = generic_rotation(dual, seed);
  rep.rotation_attempts = rot.attempts;
  const ProjectedConfig proj = project_to_pi(rot.config);
  const IncidenceGraph prime = count_hyperplane_incidences(proj.points, proj.planes);

  rep.primal = static_cast<std::int64_t>(primal.size());
  rep.dual = static_cast<std::int64_t>(star.size());
  rep.projected = static_cast<std::int64_t>(prime.size());
  rep.transpose_ok = star.transposed().edges == primal.edges && prime.edges == star.edges;
  if (rep.primal != rep.dual)
    throw ChainMismatch("primal " + std::to_string(rep.primal) + " != dual " + std::to_string(rep.dual));
  if (rep.dual != rep.projected)
    throw ChainMismatch("dual " + std::to_string(rep.dual) + " != projected " + std::to_string(rep.projected));
  if (!rep.transpose_ok) throw ChainMismatch("dual graph is not the transpose of the primal graph");
  return rep;
}

std::string family_to_json(const PfaffianFamily& family) { return family_json(family).dump(1); }

PfaffianFamily family_from_json(std::string_view text) {
  try {
    return family_from(json::parse(text));
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  }
}

std::string family_scene_to_json(const FamilyScene& scene) {
  json j;
  j["format_version"] = kFormatVersion;
  j["family"] = family_json(scene.family);
  j["points"] = json::array();
  for (const Vec2 p : scene.points) j["points"].push_back({p.x, p.y});
  j["curves"] = json::array();
  for (const auto& c : scene.curves) j["curves"].push_back(std::vector<double>(c.coeffs.begin(), c.coeffs.end()));
  return j.dump(1);
}

FamilyScene family_scene_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    FamilyScene s{family_from(j.at("family")), {}, {}};
    for (const auto& p : j.value("points", json::array())) {
      if (!p.is_array() || p.size() != 2) throw FormatError("points are [x, y] pairs");
      s.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    for (const auto& c : j.value("curves", json::array())) {
      const auto v = c.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != s.family.dimension()) throw FormatError("curve has the wrong dimension");
      s.curves.push_back(make_family_curve(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size())));
    }
    return s;
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  }
}

}  // namespace pfaffinc
