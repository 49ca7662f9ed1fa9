#pragma once

#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfaffinc/geometry.hpp"

namespace pfaffinc {

/// Dense univariate polynomial, coefficients in increasing degree.
class Poly1 {
 public:
  Poly1() = default;
  Poly1(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Poly1(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly1 identity() { return Poly1{0.0, 1.0}; }

  double operator()(double t) const;
  Poly1 derivative() const;
  int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }
  bool is_identity() const { return c_.size() == 2 && c_[0] == 0.0 && c_[1] == 1.0; }

  friend bool operator==(const Poly1&, const Poly1&) = default;

 private:
  void trim();
  std::vector<double> c_;
};

/// Sparse polynomial in (x, y); terms keyed by exponent pair (i, j).
class Poly2 {
 public:
  using Exponent = std::pair<int, int>;

  Poly2() = default;
  Poly2(std::initializer_list<std::pair<const Exponent, double>> terms);

  static Poly2 constant(double c);
  static Poly2 x();
  static Poly2 y();
  /// p(x) lifted to (x, y).
  static Poly2 in_x(const Poly1& p);
  /// p(y) lifted to (x, y).
  static Poly2 in_y(const Poly1& p);

  double operator()(double x, double y) const;
  double operator()(Vec2 p) const { return (*this)(p.x, p.y); }

  /// Degree of the zero polynomial is 0.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  bool depends_on_x() const;
  bool depends_on_y() const;
  const std::map<Exponent, double>& terms() const { return terms_; }

  void add_term(int i, int j, double c);
  Poly2 dx() const;
  Poly2 dy() const;
  /// Substitute x -> m.a1 x + m.a2 y, y -> m.a3 x + m.a4 y.
  Poly2 substitute_linear(const Mat2& m) const;
  /// For a polynomial in y only, returns it as univariate.
  Poly1 as_poly_in_y() const;

  friend Poly2 operator+(const Poly2& a, const Poly2& b);
  friend Poly2 operator-(const Poly2& a, const Poly2& b);
  friend Poly2 operator*(const Poly2& a, const Poly2& b);
  friend Poly2 operator*(double s, const Poly2& a);
  friend bool operator==(const Poly2&, const Poly2&) = default;

  std::string to_string() const;

 private:
  std::map<Exponent, double> terms_;
};

/// Sparse polynomial in a fixed number of variables (x, y, z1, ..., zr).
class MultiPoly {
 public:
  using Exponent = std::vector<int>;

  MultiPoly() = default;
  explicit MultiPoly(int nvars) : nvars_(nvars) {}

  static MultiPoly from_poly2(const Poly2& p, int nvars);
  static MultiPoly constant(double c, int nvars);
  /// The single variable with index `var`.
  static MultiPoly variable(int var, int nvars);

  int nvars() const { return nvars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponent, double>& terms() const { return terms_; }
  bool depends_on(int var) const;

  void add_term(Exponent e, double c);
  double operator()(std::span<const double> vars) const;
  /// Same polynomial viewed with more variables appended.
  MultiPoly lifted(int nvars) const;
  MultiPoly derivative(int var) const;

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(double s, const MultiPoly& a);
  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

 private:
  int nvars_ = 0;
  std::map<Exponent, double> terms_;
};

}  // namespace pfaffinc
