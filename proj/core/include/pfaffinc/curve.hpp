#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfaffinc/geometry.hpp"
#include "pfaffinc/poly.hpp"

namespace pfaffinc {

/// Polynomial vector field V(p) = (vx(p), vy(p)).
struct VectorField {
  Poly2 vx;
  Poly2 vy;

  int degree() const { return std::max(vx.degree(), vy.degree()); }
  Vec2 operator()(Vec2 p) const { return {vx(p), vy(p)}; }
  /// W(q) = A V(A^-1 q): the field carried along by the linear map A.
  VectorField transformed(const Mat2& a) const;
  friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// (V_x(p), V_y(p)) by polynomial evaluation.
Vec2 eval_vector_field(const VectorField& field, Vec2 p);

enum class CurveKind {
  Line,            // y = a x + b                    params {a, b}
  Circle,          // (cx + r cos t, cy + r sin t)   params {cx, cy, r, phi0}
  Parabola,        // y = a x^2 + b x + c            params {a, b, c}
  Exp,             // y = A e^{B x} + C              params {A, B, C}
  Log,             // (e^t, s t + c)                 params {s, c}
  Tan,             // y = a tan x + b, one period    params {a, b, k}
  Arctan,          // (tan t, t + b)                 params {b}
  Reciprocal,      // y = a / x, one branch          params {a, branch(+1|-1)}
  ExpOfPoly,       // y = e^{p(x)}                   params = coefficients of p
  ReciprocalRoot,  // (e^t, e^{-t/k})                params {k}
  Composed,        // y = f(p(x)) for a composable f
};

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view name);

/// A Pfaffian curve backed by a catalog entry: closed-form parameterization,
/// the polynomial vector field it solves, an open parameter interval, and an
/// optional invertible linear map applied on top.
///
/// The stored field is used to verify the parameterization and to steer
/// refinement; points are always produced from the closed form.
class PfaffianCurve {
 public:
  CurveKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  const VectorField& field() const { return field_; }
  const Interval& domain() const { return domain_; }
  int pf_degree() const { return field_.degree(); }
  const Mat2& transform() const { return transform_; }

  /// Composed curves: the outer graph kind, its params, and the inner polynomial.
  CurveKind base_kind() const { return base_kind_; }
  const std::vector<double>& base_params() const { return base_params_; }
  const Poly1& inner() const { return inner_; }

  /// True iff x(t) = t (graph of a function, untransformed).
  bool graph_form() const;
  /// True iff the curve is a graph y = f(x) whose dy/dt is a polynomial in y.
  bool composable() const;
  bool periodic() const { return kind_ == CurveKind::Circle; }

  /// Whether the closed form is defined at t (t inside the domain, and for
  /// composed curves, the inner value inside the outer domain).
  bool defined_at(double t) const;
  Vec2 point(double t) const;
  /// Directional vector at parameter t, read off the vector field.
  Vec2 velocity(double t) const { return field_(point(t)); }

  /// Finite parameter window, inset from open domain ends by `inset`, that
  /// contains every t whose point lies in `viewport`. May be empty.
  Interval parameter_window(const Rect& viewport, double inset = 1e-9) const;

  /// Restrict the parameter domain to a sub-interval.
  PfaffianCurve restricted(Interval sub) const;
  /// Same curve with a different (possibly wrong) field, for verification runs.
  PfaffianCurve with_field(VectorField field) const;

  std::string describe() const;

  friend PfaffianCurve apply_linear_transform(const PfaffianCurve&, double, double, double, double);
  friend PfaffianCurve compose_with_polynomial(const PfaffianCurve&, const Poly1&);
  friend PfaffianCurve make_curve(CurveKind, std::vector<double>);
  friend PfaffianCurve make_composed(CurveKind, std::vector<double>, Poly1);

  friend bool operator==(const PfaffianCurve&, const PfaffianCurve&) = default;

 private:
  Vec2 base_point(double t) const;
  bool base_defined(CurveKind kind, const std::vector<double>& p, double u) const;

  CurveKind kind_ = CurveKind::Line;
  std::vector<double> params_;
  VectorField field_;
  Interval domain_;
  Mat2 transform_;
  CurveKind base_kind_ = CurveKind::Line;
  std::vector<double> base_params_;
  Poly1 inner_ = Poly1::identity();
};

/// Builds a catalog curve; throws InvalidArgument on bad parameters.
PfaffianCurve make_curve(CurveKind kind, std::vector<double> params);
/// y = f(p(x)) for the composable outer kind f.
PfaffianCurve make_composed(CurveKind outer, std::vector<double> outer_params, Poly1 inner);

/// Image of the curve under [[a1, a2], [a3, a4]]. Throws SingularMatrix when
/// |det| <= 1e-12.
PfaffianCurve apply_linear_transform(const PfaffianCurve& curve, double a1, double a2, double a3,
                                     double a4);
inline PfaffianCurve apply_linear_transform(const PfaffianCurve& curve, const Mat2& m) {
  return apply_linear_transform(curve, m.a1, m.a2, m.a3, m.a4);
}

/// Graph of f(p(x)) for a composable graph curve y = f(x). Throws NotComposable.
PfaffianCurve compose_with_polynomial(const PfaffianCurve& curve, const Poly1& p);

namespace catalog {
PfaffianCurve line(double slope, double intercept);
PfaffianCurve circle(double cx, double cy, double radius, double phi0 = 0.0);
PfaffianCurve parabola(double a, double b, double c);
PfaffianCurve exp(double scale = 1.0, double rate = 1.0, double shift = 0.0);
PfaffianCurve log(double scale = 1.0, double shift = 0.0);
PfaffianCurve tan(double scale = 1.0, double shift = 0.0, int period = 0);
PfaffianCurve arctan(double shift = 0.0);
PfaffianCurve reciprocal(double a = 1.0, bool positive_branch = true);
PfaffianCurve exp_of_poly(const Poly1& p);
PfaffianCurve reciprocal_root(int k);
}  // namespace catalog

}  // namespace pfaffinc
