#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pfaffinc/arcs.hpp"
#include "pfaffinc/curve.hpp"

namespace pfaffinc {

/// Points and curves inside a bounded viewport, with the trace step used to
/// sample every curve.
struct Scene {
  Rect viewport{-1.0, 1.0, -1.0, 1.0};
  double step = 1e-3;
  std::vector<Vec2> points;
  std::vector<PfaffianCurve> curves;
};

/// Prepared curves of a scene, indexed like scene.curves. A curve that misses
/// the viewport gets an empty trace and no arcs.
std::vector<PreparedCurve> prepare_scene(const Scene& scene);

struct Prerotation {
  double angle = 0.0;
  int attempts = 0;
};

/// Rotates the scene so that no curve traces as a vertical segment (max |dx|
/// below 1e-9). The identity is kept when it is already valid; otherwise
/// angles are drawn from the seed, up to 100 times. The viewport becomes the
/// bounding box of the rotated viewport. Throws RotationFailed.
Scene prerotate(const Scene& scene, std::uint64_t seed, Prerotation* info = nullptr);

std::string curve_to_json_string(const PfaffianCurve& c);
std::string scene_to_json(const Scene& scene);
/// Throws FormatError on malformed input and InvalidArgument on bad curve
/// parameters.
Scene scene_from_json(std::string_view text);

}  // namespace pfaffinc
