#include "pfaffinc/scene.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "pfaffinc/errors.hpp"
#include "pfaffinc/version.hpp"

namespace pfaffinc {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json bound(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json curve_json(const PfaffianCurve& c) {
  json j;
  j["kind"] = to_string(c.kind());
  if (c.kind() == CurveKind::Composed) {
    j["params"] = c.inner().coeffs();
    j["base"] = {{"kind", to_string(c.base_kind())}, {"params", c.base_params()}};
  } else {
    j["params"] = c.params();
  }
  j["domain"] = {bound(c.domain().lo), bound(c.domain().hi)};
  if (!c.transform().is_identity()) {
    const Mat2& m = c.transform();
    j["transform"] = {m.a1, m.a2, m.a3, m.a4};
  }
  return j;
}

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(x.get<double>());
  return v;
}

Rect rect_from(const json& j) {
  const auto v = number_list(j, "viewport");
  if (v.size() != 4) throw FormatError("viewport must be [xmin, xmax, ymin, ymax]");
  const Rect r{v[0], v[1], v[2], v[3]};
  if (!r.valid()) throw FormatError("viewport is degenerate");
  return r;
}

PfaffianCurve curve_from(const json& j) {
  const CurveKind kind = curve_kind_from_string(j.at("kind").get<std::string>());
  PfaffianCurve c;
  if (kind == CurveKind::Composed) {
    const json& base = j.at("base");
    c = make_composed(curve_kind_from_string(base.at("kind").get<std::string>()),
                      number_list(base.at("params"), "base params"), Poly1(number_list(j.at("params"), "params")));
  } else {
    c = make_curve(kind, number_list(j.at("params"), "params"));
  }
  if (j.contains("domain") && !j.at("domain").is_null()) {
    const json& d = j.at("domain");
    if (!d.is_array() || d.size() != 2) throw FormatError("domain must be [lo, hi]");
    const Interval sub{d[0].is_null() ? -kInf : d[0].get<double>(), d[1].is_null() ? kInf : d[1].get<double>()};
    if (!(sub == c.domain())) c = c.restricted(sub);
  }
  if (j.contains("transform")) {
    const auto m = number_list(j.at("transform"), "transform");
    if (m.size() != 4) throw FormatError("transform must have four entries");
    c = apply_linear_transform(c, m[0], m[1], m[2], m[3]);
  }
  return c;
}

Rect bounding_box_of_rotated(const Rect& r, const Mat2& m) {
  Rect out{kInf, -kInf, kInf, -kInf};
  for (Vec2 corner : {Vec2{r.xmin, r.ymin}, Vec2{r.xmin, r.ymax}, Vec2{r.xmax, r.ymin}, Vec2{r.xmax, r.ymax}}) {
    const Vec2 q = m.apply(corner);
    out.xmin = std::min(out.xmin, q.x);
    out.xmax = std::max(out.xmax, q.x);
    out.ymin = std::min(out.ymin, q.y);
    out.ymax = std::max(out.ymax, q.y);
  }
  return out;
}

bool has_vertical_curve(const Scene& s) {
  for (const auto& c : s.curves) {
    try {
      if (is_vertical_like(trace_curve(c, s.viewport, s.step))) return true;
    } catch (const EmptyTrace&) {
    }
  }
  return false;
}

}  // namespace

std::vector<PreparedCurve> prepare_scene(const Scene& scene) {
  std::vector<PreparedCurve> out;
  out.reserve(scene.curves.size());
  for (std::size_t i = 0; i < scene.curves.size(); ++i) {
    try {
      out.push_back(prepare_curve(scene.curves[i], scene.viewport, scene.step, static_cast<int>(i)));
    } catch (const EmptyTrace&) {
      PreparedCurve pc;
      pc.id = static_cast<int>(i);
      pc.curve = scene.curves[i];
      pc.trace.step = scene.step;
      pc.trace.bbox = scene.viewport;
      out.push_back(std::move(pc));
    }
  }
  return out;
}

Scene prerotate(const Scene& scene, std::uint64_t seed, Prerotation* info) {
  if (!has_vertical_curve(scene)) {
    if (info) *info = {0.0, 0};
    return scene;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int attempt = 1; attempt <= 100; ++attempt) {
    const double theta = angle(rng);
    const Mat2 m = Mat2::rotation(theta);
    Scene out;
    out.step = scene.step;
    out.viewport = bounding_box_of_rotated(scene.viewport, m);
    for (const Vec2 p : scene.points) out.points.push_back(m.apply(p));
    for (const auto& c : scene.curves) out.curves.push_back(apply_linear_transform(c, m));
    if (!has_vertical_curve(out)) {
      if (info) *info = {theta, attempt};
      return out;
    }
  }
  throw RotationFailed("no admissible scene rotation in 100 draws");
}

std::string curve_to_json_string(const PfaffianCurve& c) { return curve_json(c).dump(); }

std::string scene_to_json(const Scene& scene) {
  json j;
  j["format_version"] = kFormatVersion;
  j["viewport"] = {scene.viewport.xmin, scene.viewport.xmax, scene.viewport.ymin, scene.viewport.ymax};
  j["step"] = scene.step;
  j["points"] = json::array();
  for (const Vec2 p : scene.points) j["points"].push_back({p.x, p.y});
  j["curves"] = json::array();
  for (const auto& c : scene.curves) j["curves"].push_back(curve_json(c));
  return j.dump(1);
}

Scene scene_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  }
  try {
    Scene s;
    bool have_viewport = false;
    if (j.contains("viewport")) {
      s.viewport = rect_from(j.at("viewport"));
      have_viewport = true;
    }
    s.step = j.value("step", 1e-3);
    if (!(s.step > 0.0)) throw FormatError("step must be positive");
    for (const auto& p : j.value("points", json::array())) {
      const auto v = number_list(p, "point");
      if (v.size() != 2) throw FormatError("points are [x, y] pairs");
      s.points.push_back({v[0], v[1]});
    }
    for (const auto& cj : j.value("curves", json::array())) {
      s.curves.push_back(curve_from(cj));
      if (cj.contains("viewport")) {
        const Rect r = rect_from(cj.at("viewport"));
        if (!have_viewport) {
          s.viewport = r;
          have_viewport = true;
        } else if (!(r == s.viewport)) {
          s.viewport = {std::min(s.viewport.xmin, r.xmin), std::max(s.viewport.xmax, r.xmax),
                        std::min(s.viewport.ymin, r.ymin), std::max(s.viewport.ymax, r.ymax)};
        }
      }
    }
    if (!have_viewport) throw FormatError("scene has no viewport");
    return s;
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  }
}

}  // namespace pfaffinc
