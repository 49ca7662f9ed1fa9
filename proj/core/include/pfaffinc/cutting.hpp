#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfaffinc/arcs.hpp"

namespace pfaffinc {

/// Vertical segment shot from an event point of the sample, up or down, to
/// the first sample curve it meets or to the viewport.
struct Ray {
  Vec2 origin;
  bool up = true;
  double y_end = 0.0;
  int stopped_by = -1;  // curve id, or -1 for the viewport
};

struct ArcRef {
  int curve = -1;
  int arc = -1;
  double t0 = 0.0;  // parameter at the left end of the cell
  double t1 = 0.0;  // parameter at the right end of the cell
};

struct CellWall {
  double x = 0.0;
  double ylo = 0.0;
  double yhi = 0.0;
  bool viewport_side = false;
};

/// A cell of the vertical decomposition: the region between a bottom and a
/// top boundary (a sample arc, or the viewport edge when absent) over an
/// x-range closed off by walls.
struct PfCell {
  int id = 0;
  std::optional<ArcRef> bottom_arc;
  std::optional<ArcRef> top_arc;
  std::optional<CellWall> left;
  std::optional<CellWall> right;
  int corner_count = 0;
  int first_slab = 0;
  int last_slab = 0;
  double area = 0.0;
};

struct Location {
  bool boundary = false;
  std::vector<int> cells;  // one cell when interior, the adjacent cells otherwise

  int cell() const { return boundary ? -1 : cells.front(); }
};

struct Cutting {
  std::vector<int> sample;
  std::vector<Ray> rays;
  std::vector<PfCell> cells;
  int r = 0;
  int s = 0;
  std::uint64_t seed = 0;
  int retries_used = 0;
  int n = 0;
  Rect viewport;
  /// Non-sample curves crossing the interior of each cell.
  std::vector<std::vector<int>> crossing_curves;

  // Slab structure behind cells and point location.
  struct Slab {
    std::vector<int> arcs;         // indices into arc_refs, bottom to top
    std::vector<int> cell_of_gap;  // arcs.size() + 1 entries
  };
  std::vector<double> xs;  // slab boundaries, xs.front() = xmin, xs.back() = xmax
  std::vector<Slab> slabs;
  std::vector<std::pair<int, int>> arc_refs;  // (curve id, arc index)
  std::shared_ptr<const std::vector<PreparedCurve>> curves;
  std::vector<char> in_sample;

  std::size_t max_crossings() const;
};

/// s uniform draws with replacement from {0, ..., n-1}, duplicates collapsed,
/// returned sorted.
std::vector<int> sample_curves(int n, int s, std::uint64_t seed);

/// Distinct event points of the sample: pairwise intersections and vertical
/// tangents, merged within 10 tol.
std::vector<Vec2> sample_events(const std::vector<PreparedCurve>& curves, const std::vector<int>& sample, double tol);

/// Up and down rays from every event point.
std::vector<Ray> build_rays(const std::vector<PreparedCurve>& curves, const std::vector<int>& sample,
                            const Rect& viewport, double tol = 1e-9);

/// Vertical decomposition of the sample arcs and rays inside the viewport.
/// Slab-cells between the same pair of arcs in adjacent slabs merge unless an
/// event point at the shared abscissa lies on or between the pair. Event
/// abscissas closer than 1e-9 (relative to the viewport width) are merged.
Cutting build_cells(std::shared_ptr<const std::vector<PreparedCurve>> curves, std::vector<int> sample,
                    std::vector<Ray> rays, const Rect& viewport);

/// Fills crossing_curves by walking every non-sample trace through the slab
/// structure; transitions between cells are bisected in t down to 1e-10.
void compute_crossings(Cutting& cutting);
std::size_t cell_crossings(const Cutting& cutting, int cell);

struct CuttingOptions {
  int max_retries = 32;
  double tol = 1e-9;
};

/// s = ceil(5 r ln n). Draws, builds and certifies that every cell is crossed
/// by at most n / r curves, retrying with seed + attempt. Throws
/// CuttingFailed after max_retries retries and InvalidArgument unless
/// 1 <= r < n.
Cutting build_cutting(std::shared_ptr<const std::vector<PreparedCurve>> curves, int r, std::uint64_t seed,
                      const CuttingOptions& opts = {});

int sample_size(int n, int r);

/// Interior cell of p, or the cells around p when p lies within tol of a
/// sample curve or on a wall.
Location locate_point(const Cutting& cutting, Vec2 p, double tol = 1e-7);

/// Slab-cell containing p, ignoring boundaries (used for walks).
int locate_cell_raw(const Cutting& cutting, Vec2 p);

double total_cell_area(const Cutting& cutting);

std::string cutting_to_json(const Cutting& cutting);
std::string cutting_crossings_csv(const Cutting& cutting);
std::string cutting_to_svg(const Cutting& cutting);

}  // namespace pfaffinc
