#include "pfaffinc/chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "pfaffinc/errors.hpp"
#include "pfaffinc/version.hpp"

namespace pfaffinc {

struct IntegralData {
  Chain prefix;
  MultiPoly integrand;  // over (x, y, z_1, ..., z_{i-1}); independent of y
  double lower = 0.0;
  double spacing = 0.25;
  mutable std::mutex mu;
  mutable std::map<long, double> knots;  // F(lower + k * spacing)

  double integrand_at(double t) const {
    std::vector<double> vars{t, 0.0};
    const auto z = eval_chain(prefix, t, 0.0);
    vars.insert(vars.end(), z.begin(), z.end());
    return integrand(vars);
  }

  double segment(double a, double b) const {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [this](double t) { return integrand_at(t); }, a, b, 15, 1e-9);
  }

  double value(double x) const {
    const long k = static_cast<long>(std::trunc((x - lower) / spacing));
    double base;
    {
      std::lock_guard lock(mu);
      knots.emplace(0, 0.0);
      const long dir = k >= 0 ? 1 : -1;
      long j = 0;
      for (long step = dir; (dir > 0 ? step <= k : step >= k); step += dir)
        if (knots.count(step)) j = step;
      for (long step = j + dir; (dir > 0 ? step <= k : step >= k); step += dir)
        knots[step] = knots[step - dir] + segment(lower + (step - dir) * spacing, lower + step * spacing);
      base = knots[k];
    }
    return base + segment(lower + k * spacing, x);
  }
};

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_link(const ChainLink& link, double x, double y) {
  switch (link.kind) {
    case NodeKind::Polynomial: return link.poly(x, y);
    case NodeKind::ExpOfPoly: return std::exp(link.poly(x, y));
    case NodeKind::Reciprocal: return 1.0 / link.poly(x, y);
    case NodeKind::TanHalf: return std::tan(0.5 * x);
    case NodeKind::CosSqHalf: {
      const double c = std::cos(0.5 * x);
      return c * c;
    }
    case NodeKind::Integral: return link.integral->value(x);
  }
  return 0.0;
}

std::vector<double> eval_prefix(const Chain& chain, std::size_t count, double x, double y) {
  std::vector<double> z;
  z.reserve(count);
  for (std::size_t i = 0; i < count; ++i) z.push_back(eval_link(chain[i], x, y));
  return z;
}

MultiPoly zero_poly(int nvars) { return MultiPoly(nvars); }

MultiPoly drop_last_var(const MultiPoly& p) {
  MultiPoly r(p.nvars() - 1);
  for (const auto& [e, c] : p.terms()) {
    if (e.back() != 0) throw FormatError("integral link derivative depends on the link itself");
    r.add_term(MultiPoly::Exponent(e.begin(), e.end() - 1), c);
  }
  return r;
}

// Ridders' polynomial extrapolation of central differences.
double ridders(const auto& f, double x, double h) {
  constexpr int kTab = 10;
  constexpr double kCon = 1.4, kCon2 = kCon * kCon, kSafe = 2.0;
  double a[kTab][kTab];
  a[0][0] = (f(x + h) - f(x - h)) / (2.0 * h);
  double err = std::numeric_limits<double>::max();
  double ans = a[0][0];
  for (int i = 1; i < kTab; ++i) {
    h /= kCon;
    a[0][i] = (f(x + h) - f(x - h)) / (2.0 * h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double errt = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (errt <= err) {
        err = errt;
        ans = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * err) break;
  }
  return ans;
}

double initial_step(double v, double lo, double hi) {
  const double room = std::min(v - lo, hi - v);
  return std::min(0.1, 0.5 * room);
}

std::string exponent_key(const std::vector<int>& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(e[i]);
  }
  return s;
}

std::vector<int> parse_key(const std::string& key) {
  std::vector<int> e;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      e.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw FormatError("bad exponent key '" + key + "'");
    }
  }
  return e;
}

json multipoly_json(const MultiPoly& p) {
  json j = json::object();
  for (const auto& [e, c] : p.terms()) j[exponent_key(e)] = c;
  return j;
}

MultiPoly multipoly_from_json(const json& j, int nvars) {
  MultiPoly p(nvars);
  if (!j.is_object()) throw FormatError("polynomial must be an exponent -> coefficient object");
  for (const auto& [k, v] : j.items()) {
    auto e = parse_key(k);
    if (static_cast<int>(e.size()) != nvars) throw FormatError("exponent '" + k + "' has the wrong arity");
    p.add_term(std::move(e), v.get<double>());
  }
  return p;
}

json poly2_json(const Poly2& p) {
  json j = json::object();
  for (const auto& [e, c] : p.terms()) j[exponent_key({e.first, e.second})] = c;
  return j;
}

Poly2 poly2_from_json(const json& j) {
  Poly2 p;
  if (!j.is_object()) throw FormatError("polynomial must be an exponent -> coefficient object");
  for (const auto& [k, v] : j.items()) {
    const auto e = parse_key(k);
    if (e.size() != 2) throw FormatError("bivariate exponent '" + k + "' needs two entries");
    p.add_term(e[0], e[1], v.get<double>());
  }
  return p;
}

json bound_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double bound_from_json(const json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Polynomial: return "polynomial";
    case NodeKind::ExpOfPoly: return "exp-of-poly";
    case NodeKind::Reciprocal: return "reciprocal";
    case NodeKind::TanHalf: return "tan-half";
    case NodeKind::CosSqHalf: return "cos2-half";
    case NodeKind::Integral: return "integral";
  }
  return "?";
}

NodeKind node_kind_from_string(std::string_view name) {
  for (NodeKind k : {NodeKind::Polynomial, NodeKind::ExpOfPoly, NodeKind::Reciprocal, NodeKind::TanHalf,
                     NodeKind::CosSqHalf, NodeKind::Integral})
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown chain node kind '" + std::string(name) + "'");
}

std::vector<double> eval_chain(const Chain& chain, double x, double y) {
  return eval_prefix(chain, chain.size(), x, y);
}

namespace links {

ChainLink polynomial(const Poly2& p, int index) {
  const int nv = index + 3;
  return {NodeKind::Polynomial, p, -1, 0.0, MultiPoly::from_poly2(p.dx(), nv), MultiPoly::from_poly2(p.dy(), nv), {}};
}

ChainLink exp_of_poly(const Poly2& p, int index) {
  const int nv = index + 3;
  const MultiPoly z = MultiPoly::variable(index + 2, nv);
  return {NodeKind::ExpOfPoly, p, -1, 0.0, MultiPoly::from_poly2(p.dx(), nv) * z,
          MultiPoly::from_poly2(p.dy(), nv) * z, {}};
}

ChainLink reciprocal(const Poly2& p, int index) {
  const int nv = index + 3;
  const MultiPoly z = MultiPoly::variable(index + 2, nv);
  return {NodeKind::Reciprocal, p, -1, 0.0, -1.0 * (MultiPoly::from_poly2(p.dx(), nv) * z * z),
          -1.0 * (MultiPoly::from_poly2(p.dy(), nv) * z * z), {}};
}

ChainLink tan_half(int index) {
  const int nv = index + 3;
  const MultiPoly z = MultiPoly::variable(index + 2, nv);
  return {NodeKind::TanHalf, {}, -1, 0.0, MultiPoly::constant(0.5, nv) + 0.5 * (z * z), zero_poly(nv), {}};
}

ChainLink cos_sq_half(int tan_index, int index) {
  if (tan_index < 0 || tan_index >= index) throw InvalidArgument("cos^2(x/2) must follow its tan(x/2) link");
  const int nv = index + 3;
  const MultiPoly t = MultiPoly::variable(tan_index + 2, nv);
  const MultiPoly z = MultiPoly::variable(index + 2, nv);
  return {NodeKind::CosSqHalf, {}, tan_index, 0.0, -1.0 * (t * z), zero_poly(nv), {}};
}

}  // namespace links

double PfaffianFunction::operator()(double x, double y) const {
  std::vector<double> vars{x, y};
  const auto z = eval_chain(chain, x, y);
  vars.insert(vars.end(), z.begin(), z.end());
  return g(vars);
}

ChainReport verify_chain(const Chain& chain, const Rect& domain, std::span<const Vec2> points, double tol) {
  if (points.empty()) throw InvalidArgument("need at least one sample");
  ChainReport rep;
  rep.links.resize(chain.size());
  rep.samples = static_cast<int>(points.size());
  for (const Vec2 p : points) {
    if (!domain.contains_open(p)) throw DomainViolation("sample (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") leaves U");
    const double hx = initial_step(p.x, domain.xmin, domain.xmax);
    const double hy = initial_step(p.y, domain.ymin, domain.ymax);
    std::vector<double> vars{p.x, p.y};
    const auto z = eval_chain(chain, p.x, p.y);
    vars.insert(vars.end(), z.begin(), z.end());
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const ChainLink& link = chain[i];
      const double nx = ridders([&](double x) { return eval_prefix(chain, i + 1, x, p.y)[i]; }, p.x, hx);
      const double ny = ridders([&](double y) { return eval_prefix(chain, i + 1, p.x, y)[i]; }, p.y, hy);
      const double ex = std::abs(nx - link.gx(vars)) / std::max(1.0, std::abs(nx));
      const double ey = std::abs(ny - link.gy(vars)) / std::max(1.0, std::abs(ny));
      LinkError& le = rep.links[i];
      if (ex > le.max_error_x || ey > le.max_error_y) le.worst = p;
      le.max_error_x = std::max(le.max_error_x, ex);
      le.max_error_y = std::max(le.max_error_y, ey);
      rep.max_error = std::max({rep.max_error, ex, ey});
    }
  }
  rep.pass = rep.max_error <= tol;
  return rep;
}

ChainReport verify_chain(const Chain& chain, const Rect& domain, int samples, double tol, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("need at least one sample");
  auto clip = [](double v, double fallback) { return std::isfinite(v) ? v : fallback; };
  const Rect box{clip(domain.xmin, -10.0), clip(domain.xmax, 10.0), clip(domain.ymin, -10.0),
                 clip(domain.ymax, 10.0)};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax);
  std::vector<Vec2> pts;
  while (static_cast<int>(pts.size()) < samples) {
    const Vec2 p{ux(rng), uy(rng)};
    if (domain.contains_open(p)) pts.push_back(p);
  }
  return verify_chain(chain, domain, pts, tol);
}

OrderDegree order_and_degree(const PfaffianFunction& pf) {
  OrderDegree od;
  od.order = static_cast<int>(pf.chain.size());
  for (const auto& link : pf.chain) od.chain_degree = std::max({od.chain_degree, link.gx.degree(), link.gy.degree()});
  od.g_degree = pf.g.degree();
  return od;
}

PfaffianFunction extend_with_integral(const PfaffianFunction& pf, double c) {
  const int r = static_cast<int>(pf.chain.size());
  const int nv = r + 2;
  if (pf.g.nvars() > nv) throw NotUnivariateForm("g has more variables than the chain provides");
  const MultiPoly h1 = MultiPoly::variable(1, nv) - pf.g.lifted(nv);
  if (h1.depends_on(1)) throw NotUnivariateForm("function is not of the form y - h(x)");
  for (const auto& link : pf.chain)
    if (!link.gy.is_zero()) throw NotUnivariateForm("chain depends on y, so h is not univariate");
  if (!(c >= pf.domain.xmin && c <= pf.domain.xmax)) throw InvalidArgument("lower limit lies outside U");

  auto data = std::make_shared<IntegralData>();
  data->prefix = pf.chain;
  data->integrand = h1;
  data->lower = c;

  PfaffianFunction out;
  out.chain = pf.chain;
  out.domain = pf.domain;
  ChainLink link;
  link.kind = NodeKind::Integral;
  link.lower = c;
  link.gx = h1.lifted(nv + 1);
  link.gy = zero_poly(nv + 1);
  link.integral = std::move(data);
  out.chain.push_back(std::move(link));
  out.g = MultiPoly::variable(1, nv + 1) - MultiPoly::variable(nv, nv + 1);
  return out;
}

namespace chains {

PfaffianFunction worked_example() {
  PfaffianFunction pf;
  pf.domain = {-kInf, kInf, -kInf, kInf};
  pf.chain.push_back(links::exp_of_poly(Poly2{{{2, 0}, 1.0}, {{1, 0}, 3.0}}, 0));
  pf.g = MultiPoly(3);
  pf.g.add_term({1, 5, 0}, 1.0);
  pf.g.add_term({0, 0, 1}, -1.0);
  return pf;
}

PfaffianFunction cosine() {
  PfaffianFunction pf;
  pf.domain = {-std::numbers::pi, std::numbers::pi, -kInf, kInf};
  pf.chain.push_back(links::tan_half(0));
  pf.chain.push_back(links::cos_sq_half(0, 1));
  // cos x = 2 cos^2(x/2) - 1
  pf.g = MultiPoly(4);
  pf.g.add_term({0, 1, 0, 0}, 1.0);
  pf.g.add_term({0, 0, 0, 1}, -2.0);
  pf.g.add_term({0, 0, 0, 0}, 1.0);
  return pf;
}

PfaffianFunction polynomial_graph(const Poly1& h) {
  PfaffianFunction pf;
  pf.domain = {-kInf, kInf, -kInf, kInf};
  pf.g = MultiPoly::variable(1, 2) - MultiPoly::from_poly2(Poly2::in_x(h), 2);
  return pf;
}

PfaffianFunction exp_graph() {
  PfaffianFunction pf;
  pf.domain = {-kInf, kInf, -kInf, kInf};
  pf.chain.push_back(links::exp_of_poly(Poly2::x(), 0));
  pf.g = MultiPoly::variable(1, 3) - MultiPoly::variable(2, 3);
  return pf;
}

PfaffianFunction exp_over_x(double xmin) {
  if (!(xmin > 0.0)) throw InvalidArgument("e^x / x needs x > 0");
  PfaffianFunction pf;
  pf.domain = {xmin, kInf, -kInf, kInf};
  pf.chain.push_back(links::exp_of_poly(Poly2::x(), 0));
  pf.chain.push_back(links::reciprocal(Poly2::x(), 1));
  pf.g = MultiPoly::variable(1, 4) - MultiPoly::variable(2, 4) * MultiPoly::variable(3, 4);
  return pf;
}

}  // namespace chains

std::string chain_to_json(const PfaffianFunction& pf) {
  json j;
  j["format_version"] = kFormatVersion;
  j["U"] = {bound_json(pf.domain.xmin), bound_json(pf.domain.xmax), bound_json(pf.domain.ymin),
            bound_json(pf.domain.ymax)};
  j["chain"] = json::array();
  for (const auto& link : pf.chain) {
    json l;
    l["node_kind"] = to_string(link.kind);
    json params = json::object();
    switch (link.kind) {
      case NodeKind::Polynomial:
      case NodeKind::ExpOfPoly:
      case NodeKind::Reciprocal: params["poly"] = poly2_json(link.poly); break;
      case NodeKind::CosSqHalf: params["ref"] = link.ref; break;
      case NodeKind::Integral: params["c"] = link.lower; break;
      case NodeKind::TanHalf: break;
    }
    l["params"] = params;
    l["gx"] = multipoly_json(link.gx);
    l["gy"] = multipoly_json(link.gy);
    j["chain"].push_back(l);
  }
  j["g"] = multipoly_json(pf.g);
  return j.dump(2);
}

PfaffianFunction chain_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  }
  try {
    PfaffianFunction pf;
    pf.domain = {-kInf, kInf, -kInf, kInf};
    if (j.contains("U")) {
      const auto& u = j.at("U");
      if (!u.is_array() || u.size() != 4) throw FormatError("U must be [xmin, xmax, ymin, ymax]");
      pf.domain = {bound_from_json(u[0], -kInf), bound_from_json(u[1], kInf), bound_from_json(u[2], -kInf),
                   bound_from_json(u[3], kInf)};
    }
    for (const auto& l : j.value("chain", json::array())) {
      const int index = static_cast<int>(pf.chain.size());
      const int nv = index + 3;
      const NodeKind kind = node_kind_from_string(l.at("node_kind").get<std::string>());
      const json params = l.value("params", json::object());
      ChainLink link;
      switch (kind) {
        case NodeKind::Polynomial: link = links::polynomial(poly2_from_json(params.at("poly")), index); break;
        case NodeKind::ExpOfPoly: link = links::exp_of_poly(poly2_from_json(params.at("poly")), index); break;
        case NodeKind::Reciprocal: link = links::reciprocal(poly2_from_json(params.at("poly")), index); break;
        case NodeKind::TanHalf: link = links::tan_half(index); break;
        case NodeKind::CosSqHalf: link = links::cos_sq_half(params.at("ref").get<int>(), index); break;
        case NodeKind::Integral: {
          link.kind = NodeKind::Integral;
          link.lower = params.at("c").get<double>();
          const MultiPoly gx = multipoly_from_json(l.at("gx"), nv);
          auto data = std::make_shared<IntegralData>();
          data->prefix = pf.chain;
          data->integrand = drop_last_var(gx);
          data->lower = link.lower;
          link.integral = std::move(data);
          link.gx = gx;
          link.gy = zero_poly(nv);
          break;
        }
      }
      if (l.contains("gx")) link.gx = multipoly_from_json(l.at("gx"), nv);
      if (l.contains("gy")) link.gy = multipoly_from_json(l.at("gy"), nv);
      pf.chain.push_back(std::move(link));
    }
    const int nvars = static_cast<int>(pf.chain.size()) + 2;
    pf.g = j.contains("g") ? multipoly_from_json(j.at("g"), nvars) : MultiPoly(nvars);
    return pf;
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  }
}

}  // namespace pfaffinc
