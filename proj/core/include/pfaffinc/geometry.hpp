#pragma once

#include <algorithm>
#include <cmath>

namespace pfaffinc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Distance from p to the closed segment [a, b]; `param` receives the
/// clamped position along the segment in [0, 1].
inline double segment_distance(Vec2 p, Vec2 a, Vec2 b, double* param = nullptr) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  if (param) *param = u;
  return distance(p, a + u * d);
}

/// Axis-aligned rectangle. Used for viewports and rectangular domains.
struct Rect {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool valid() const { return xmax > xmin && ymax > ymin; }
  bool contains(Vec2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  bool contains_open(Vec2 p) const {
    return p.x > xmin && p.x < xmax && p.y > ymin && p.y < ymax;
  }
  friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

/// Row-major 2x2 matrix [[a1, a2], [a3, a4]].
struct Mat2 {
  double a1 = 1.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
  }
  double det() const { return a1 * a4 - a2 * a3; }
  Mat2 inverse() const {
    const double d = det();
    return {a4 / d, -a2 / d, -a3 / d, a1 / d};
  }
  Vec2 apply(Vec2 p) const { return {a1 * p.x + a2 * p.y, a3 * p.x + a4 * p.y}; }
  bool is_identity() const { return a1 == 1.0 && a2 == 0.0 && a3 == 0.0 && a4 == 1.0; }
  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a1 * r.a1 + l.a2 * r.a3, l.a1 * r.a2 + l.a2 * r.a4,
            l.a3 * r.a1 + l.a4 * r.a3, l.a3 * r.a2 + l.a4 * r.a4};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// Open real interval (lo, hi); infinities allowed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(hi > lo); }
  bool contains(double t) const { return t > lo && t < hi; }
  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace pfaffinc
