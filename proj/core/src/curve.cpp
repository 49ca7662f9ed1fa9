#include "pfaffinc/curve.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pfaffinc/errors.hpp"

namespace pfaffinc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

void require_params(const std::vector<double>& p, std::size_t n, std::string_view kind) {
  if (p.size() != n)
    throw InvalidArgument(std::string(kind) + " expects " + std::to_string(n) + " parameters");
}

bool is_graph_kind(CurveKind k) {
  switch (k) {
    case CurveKind::Line:
    case CurveKind::Parabola:
    case CurveKind::Exp:
    case CurveKind::Tan:
    case CurveKind::Reciprocal:
    case CurveKind::ExpOfPoly:
    case CurveKind::Composed:
      return true;
    default:
      return false;
  }
}

bool is_composable_kind(CurveKind k) {
  return k == CurveKind::Line || k == CurveKind::Exp || k == CurveKind::Tan ||
         k == CurveKind::Reciprocal;
}

VectorField base_field(CurveKind kind, const std::vector<double>& p, const Poly1& inner) {
  const Poly2 one = Poly2::constant(1.0);
  switch (kind) {
    case CurveKind::Line:
      return {one, Poly2::constant(p[0])};
    case CurveKind::Circle:
      return {Poly2{{{0, 1}, -1.0}, {{0, 0}, p[1]}}, Poly2{{{1, 0}, 1.0}, {{0, 0}, -p[0]}}};
    case CurveKind::Parabola:
      return {one, Poly2{{{1, 0}, 2.0 * p[0]}, {{0, 0}, p[1]}}};
    case CurveKind::Exp:
      return {one, Poly2{{{0, 1}, p[1]}, {{0, 0}, -p[1] * p[2]}}};
    case CurveKind::Log:
      return {Poly2::x(), Poly2::constant(p[0])};
    case CurveKind::Tan: {
      const double a = p[0], b = p[1];
      return {one, Poly2{{{0, 2}, 1.0 / a}, {{0, 1}, -2.0 * b / a}, {{0, 0}, a + b * b / a}}};
    }
    case CurveKind::Arctan:
      return {Poly2{{{2, 0}, 1.0}, {{0, 0}, 1.0}}, one};
    case CurveKind::Reciprocal:
      return {one, Poly2{{{0, 2}, -1.0 / p[0]}}};
    case CurveKind::ExpOfPoly:
      return {one, Poly2::y() * Poly2::in_x(inner.derivative())};
    case CurveKind::ReciprocalRoot:
      return {Poly2::x(), Poly2{{{0, 1}, -1.0 / p[0]}}};
    case CurveKind::Composed:
      break;
  }
  throw InvalidArgument("composed curves have no base field");
}

Interval natural_domain(CurveKind kind, const std::vector<double>& p) {
  switch (kind) {
    case CurveKind::Circle:
      return {p[3], p[3] + 2.0 * kPi};
    case CurveKind::Tan: {
      const double k = p[2];
      return {k * kPi - kPi / 2.0, k * kPi + kPi / 2.0};
    }
    case CurveKind::Arctan:
      return {-kPi / 2.0, kPi / 2.0};
    case CurveKind::Reciprocal:
      return p[1] > 0 ? Interval{0.0, kInf} : Interval{-kInf, 0.0};
    default:
      return {-kInf, kInf};
  }
}

double graph_value(CurveKind kind, const std::vector<double>& p, double u) {
  switch (kind) {
    case CurveKind::Line:
      return p[0] * u + p[1];
    case CurveKind::Exp:
      return p[0] * std::exp(p[1] * u) + p[2];
    case CurveKind::Tan:
      return p[0] * std::tan(u) + p[1];
    case CurveKind::Reciprocal:
      return p[0] / u;
    default:
      throw InvalidArgument("not a composable graph kind");
  }
}

Interval intersect(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

Interval sorted(double a, double b) { return a <= b ? Interval{a, b} : Interval{b, a}; }

}  // namespace

// ---------------------------------------------------------------- fields

VectorField VectorField::transformed(const Mat2& a) const {
  const Mat2 inv = a.inverse();
  const Poly2 px = vx.substitute_linear(inv);
  const Poly2 py = vy.substitute_linear(inv);
  return {a.a1 * px + a.a2 * py, a.a3 * px + a.a4 * py};
}

Vec2 eval_vector_field(const VectorField& field, Vec2 p) { return field(p); }

// ---------------------------------------------------------------- kinds

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Line: return "line";
    case CurveKind::Circle: return "circle";
    case CurveKind::Parabola: return "parabola";
    case CurveKind::Exp: return "exp";
    case CurveKind::Log: return "log";
    case CurveKind::Tan: return "tan";
    case CurveKind::Arctan: return "arctan";
    case CurveKind::Reciprocal: return "reciprocal";
    case CurveKind::ExpOfPoly: return "exp-of-poly";
    case CurveKind::ReciprocalRoot: return "reciprocal-root";
    case CurveKind::Composed: return "composed";
  }
  return "?";
}

CurveKind curve_kind_from_string(std::string_view name) {
  static constexpr std::array kinds = {
      CurveKind::Line,       CurveKind::Circle,    CurveKind::Parabola,       CurveKind::Exp,
      CurveKind::Log,        CurveKind::Tan,       CurveKind::Arctan,         CurveKind::Reciprocal,
      CurveKind::ExpOfPoly,  CurveKind::ReciprocalRoot, CurveKind::Composed};
  for (CurveKind k : kinds)
    if (to_string(k) == name) return k;
  throw FormatError("unknown curve kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- construction

PfaffianCurve make_curve(CurveKind kind, std::vector<double> params) {
  const auto name = to_string(kind);
  PfaffianCurve c;
  c.kind_ = kind;
  switch (kind) {
    case CurveKind::Line:
      require_params(params, 2, name);
      break;
    case CurveKind::Circle:
      if (params.size() == 3) params.push_back(0.0);
      require_params(params, 4, name);
      if (!(params[2] > 0.0)) throw InvalidArgument("circle radius must be positive");
      break;
    case CurveKind::Parabola:
      require_params(params, 3, name);
      break;
    case CurveKind::Exp:
      require_params(params, 3, name);
      if (params[0] == 0.0 || params[1] == 0.0) throw InvalidArgument("exp needs nonzero A and B");
      break;
    case CurveKind::Log:
      require_params(params, 2, name);
      break;
    case CurveKind::Tan:
      require_params(params, 3, name);
      if (params[0] == 0.0) throw InvalidArgument("tan needs a nonzero scale");
      if (params[2] != std::round(params[2])) throw InvalidArgument("tan period index must be integral");
      break;
    case CurveKind::Arctan:
      require_params(params, 1, name);
      break;
    case CurveKind::Reciprocal:
      require_params(params, 2, name);
      if (params[0] == 0.0) throw InvalidArgument("reciprocal needs a nonzero numerator");
      if (params[1] != 1.0 && params[1] != -1.0) throw InvalidArgument("reciprocal branch must be +1 or -1");
      break;
    case CurveKind::ExpOfPoly:
      c.inner_ = Poly1(params);
      break;
    case CurveKind::ReciprocalRoot:
      require_params(params, 1, name);
      if (params[0] < 1.0 || params[0] != std::round(params[0]))
        throw InvalidArgument("reciprocal-root needs a positive integer k");
      break;
    case CurveKind::Composed:
      throw InvalidArgument("use make_composed for composed curves");
  }
  c.params_ = std::move(params);
  c.base_kind_ = kind;
  c.base_params_ = c.params_;
  c.field_ = base_field(kind, c.params_, c.inner_);
  c.domain_ = natural_domain(kind, c.params_);
  return c;
}

PfaffianCurve make_composed(CurveKind outer, std::vector<double> outer_params, Poly1 inner) {
  if (!is_composable_kind(outer))
    throw NotComposable(std::string(to_string(outer)) + " has no polynomial derivative in y");
  const PfaffianCurve base = make_curve(outer, outer_params);
  if (inner.is_identity()) return base;
  if (outer == CurveKind::Exp && outer_params == std::vector<double>{1.0, 1.0, 0.0})
    return make_curve(CurveKind::ExpOfPoly, inner.coeffs());

  PfaffianCurve c;
  c.kind_ = CurveKind::Composed;
  c.base_kind_ = outer;
  c.base_params_ = std::move(outer_params);
  c.inner_ = std::move(inner);
  c.params_ = c.inner_.coeffs();
  // d f(p(t))/dt = q(f(p(t))) p'(t) where q is the outer field's vy in terms of y.
  const Poly1 q = base.field().vy.as_poly_in_y();
  c.field_ = {Poly2::constant(1.0), Poly2::in_y(q) * Poly2::in_x(c.inner_.derivative())};
  c.domain_ = {-kInf, kInf};
  return c;
}

namespace catalog {
PfaffianCurve line(double slope, double intercept) { return make_curve(CurveKind::Line, {slope, intercept}); }
PfaffianCurve circle(double cx, double cy, double radius, double phi0) {
  return make_curve(CurveKind::Circle, {cx, cy, radius, phi0});
}
PfaffianCurve parabola(double a, double b, double c) { return make_curve(CurveKind::Parabola, {a, b, c}); }
PfaffianCurve exp(double scale, double rate, double shift) {
  return make_curve(CurveKind::Exp, {scale, rate, shift});
}
PfaffianCurve log(double scale, double shift) { return make_curve(CurveKind::Log, {scale, shift}); }
PfaffianCurve tan(double scale, double shift, int period) {
  return make_curve(CurveKind::Tan, {scale, shift, static_cast<double>(period)});
}
PfaffianCurve arctan(double shift) { return make_curve(CurveKind::Arctan, {shift}); }
PfaffianCurve reciprocal(double a, bool positive_branch) {
  return make_curve(CurveKind::Reciprocal, {a, positive_branch ? 1.0 : -1.0});
}
PfaffianCurve exp_of_poly(const Poly1& p) { return make_curve(CurveKind::ExpOfPoly, p.coeffs()); }
PfaffianCurve reciprocal_root(int k) { return make_curve(CurveKind::ReciprocalRoot, {static_cast<double>(k)}); }
}  // namespace catalog

PfaffianCurve apply_linear_transform(const PfaffianCurve& curve, double a1, double a2, double a3,
                                     double a4) {
  const Mat2 m{a1, a2, a3, a4};
  if (std::abs(m.det()) <= 1e-12) throw SingularMatrix("determinant is zero");
  PfaffianCurve c = curve;
  c.transform_ = m * curve.transform_;
  c.field_ = curve.field_.transformed(m);
  return c;
}

PfaffianCurve compose_with_polynomial(const PfaffianCurve& curve, const Poly1& p) {
  if (!curve.composable())
    throw NotComposable(curve.describe() + " is not a graph with dy/dt in R[y]");
  return make_composed(curve.kind(), curve.params(), p);
}

// ---------------------------------------------------------------- evaluation

bool PfaffianCurve::graph_form() const { return is_graph_kind(kind_) && transform_.is_identity(); }

bool PfaffianCurve::composable() const { return is_composable_kind(kind_) && transform_.is_identity(); }

bool PfaffianCurve::base_defined(CurveKind kind, const std::vector<double>& p, double u) const {
  if (kind == CurveKind::Tan) return natural_domain(kind, p).contains(u);
  if (kind == CurveKind::Reciprocal) return p[1] > 0 ? u > 0.0 : u < 0.0;
  return std::isfinite(u);
}

bool PfaffianCurve::defined_at(double t) const {
  if (!domain_.contains(t)) return false;
  if (kind_ == CurveKind::Composed) return base_defined(base_kind_, base_params_, inner_(t));
  return true;
}

Vec2 PfaffianCurve::base_point(double t) const {
  const auto& p = params_;
  switch (kind_) {
    case CurveKind::Line:
      return {t, p[0] * t + p[1]};
    case CurveKind::Circle:
      return {p[0] + p[2] * std::cos(t), p[1] + p[2] * std::sin(t)};
    case CurveKind::Parabola:
      return {t, (p[0] * t + p[1]) * t + p[2]};
    case CurveKind::Exp:
      return {t, p[0] * std::exp(p[1] * t) + p[2]};
    case CurveKind::Log:
      return {std::exp(t), p[0] * t + p[1]};
    case CurveKind::Tan:
      return {t, p[0] * std::tan(t) + p[1]};
    case CurveKind::Arctan:
      return {std::tan(t), t + p[0]};
    case CurveKind::Reciprocal:
      return {t, p[0] / t};
    case CurveKind::ExpOfPoly:
      return {t, std::exp(inner_(t))};
    case CurveKind::ReciprocalRoot:
      return {std::exp(t), std::exp(-t / p[0])};
    case CurveKind::Composed:
      return {t, graph_value(base_kind_, base_params_, inner_(t))};
  }
  return {};
}

Vec2 PfaffianCurve::point(double t) const {
  const Vec2 b = base_point(t);
  return transform_.is_identity() ? b : transform_.apply(b);
}

Interval PfaffianCurve::parameter_window(const Rect& viewport, double inset) const {
  // Bounding box of the viewport pulled back to untransformed coordinates.
  Rect b = viewport;
  if (!transform_.is_identity()) {
    const Mat2 inv = transform_.inverse();
    const std::array<Vec2, 4> corners = {inv.apply({viewport.xmin, viewport.ymin}),
                                         inv.apply({viewport.xmax, viewport.ymin}),
                                         inv.apply({viewport.xmin, viewport.ymax}),
                                         inv.apply({viewport.xmax, viewport.ymax})};
    b = {kInf, -kInf, kInf, -kInf};
    for (Vec2 c : corners) {
      b.xmin = std::min(b.xmin, c.x);
      b.xmax = std::max(b.xmax, c.x);
      b.ymin = std::min(b.ymin, c.y);
      b.ymax = std::max(b.ymax, c.y);
    }
  }
  const double pad = 1e-12 * (1.0 + std::max({std::abs(b.xmin), std::abs(b.xmax), std::abs(b.ymin),
                                             std::abs(b.ymax)}));
  b.xmin -= pad;
  b.xmax += pad;
  b.ymin -= pad;
  b.ymax += pad;
  const double ymax_abs = std::max(std::abs(b.ymin), std::abs(b.ymax));

  Interval w{-kInf, kInf};
  const auto& p = params_;
  switch (kind_) {
    case CurveKind::Circle:
      break;
    case CurveKind::Tan: {
      w = {b.xmin, b.xmax};
      const Interval v = sorted((b.ymin - p[1]) / p[0], (b.ymax - p[1]) / p[0]);
      w = intersect(w, {p[2] * kPi + std::atan(v.lo), p[2] * kPi + std::atan(v.hi)});
      break;
    }
    case CurveKind::Reciprocal:
      w = {b.xmin, b.xmax};
      if (ymax_abs <= 0.0) return {0.0, 0.0};
      if (p[1] > 0)
        w.lo = std::max(w.lo, std::abs(p[0]) / ymax_abs);
      else
        w.hi = std::min(w.hi, -std::abs(p[0]) / ymax_abs);
      break;
    case CurveKind::Log:
    case CurveKind::ReciprocalRoot: {
      if (b.xmax <= 0.0) return {0.0, 0.0};
      const double xlo = std::max(b.xmin, 1e-9 * std::max(1.0, b.xmax));
      w = {std::log(xlo), std::log(b.xmax)};
      if (kind_ == CurveKind::Log) {
        if (p[0] != 0.0) w = intersect(w, sorted((b.ymin - p[1]) / p[0], (b.ymax - p[1]) / p[0]));
      } else {
        if (b.ymax <= 0.0) return {0.0, 0.0};
        w.lo = std::max(w.lo, -p[0] * std::log(b.ymax));
        if (b.ymin > 0.0) w.hi = std::min(w.hi, -p[0] * std::log(b.ymin));
      }
      break;
    }
    case CurveKind::Arctan:
      w = intersect({std::atan(b.xmin), std::atan(b.xmax)}, {b.ymin - p[0], b.ymax - p[0]});
      break;
    default:
      w = {b.xmin, b.xmax};
      break;
  }
  if (std::isfinite(domain_.lo)) w.lo = std::max(w.lo, domain_.lo + inset);
  if (std::isfinite(domain_.hi)) w.hi = std::min(w.hi, domain_.hi - inset);
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi)) throw InvalidArgument("unbounded parameter window");
  return w;
}

PfaffianCurve PfaffianCurve::restricted(Interval sub) const {
  PfaffianCurve c = *this;
  c.domain_ = intersect(domain_, sub);
  if (c.domain_.empty()) throw InvalidArgument("restricted domain is empty");
  return c;
}

PfaffianCurve PfaffianCurve::with_field(VectorField field) const {
  PfaffianCurve c = *this;
  c.field_ = std::move(field);
  return c;
}

std::string PfaffianCurve::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == CurveKind::Composed) os << "[" << to_string(base_kind_) << "]";
  os << "(";
  for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
  os << ")";
  if (!transform_.is_identity())
    os << " x [" << transform_.a1 << "," << transform_.a2 << ";" << transform_.a3 << "," << transform_.a4 << "]";
  return os.str();
}

}  // namespace pfaffinc
