#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pfaffinc/geometry.hpp"
#include "pfaffinc/incidence.hpp"
#include "pfaffinc/poly.hpp"

namespace pfaffinc {

/// One basis function m_i(x, y) of a family: x^i y^j, e^{p(x,y)} or ln p(x,y).
struct FamilyTerm {
  enum class Kind { Monomial, Exp, Log };
  Kind kind = Kind::Monomial;
  int i = 0;
  int j = 0;
  Poly2 arg;

  static FamilyTerm monomial(int i, int j);
  static FamilyTerm exp(Poly2 arg);
  static FamilyTerm log(Poly2 arg);

  double operator()(double x, double y) const;
  std::string to_string() const;
};

/// Curves a_1 m_1 + ... + a_d m_d = 0 over the bounded open rectangle U.
struct PfaffianFamily {
  std::vector<FamilyTerm> terms;
  Rect domain;

  int dimension() const { return static_cast<int>(terms.size()); }
  Eigen::VectorXd eval(Vec2 p) const;
  double f(const Eigen::VectorXd& a, Vec2 p) const;
};

/// Throws InvalidArgument unless d >= 2 and U is bounded and nonempty.
PfaffianFamily make_family(std::vector<FamilyTerm> terms, const Rect& domain);

namespace families {
PfaffianFamily lines(const Rect& U);          // (1, x, y)
PfaffianFamily exp_graphs(const Rect& U);     // (1, y, e^x)
PfaffianFamily parabolas(const Rect& U);      // (1, x, x^2, y)
PfaffianFamily exp_lines(const Rect& U);      // (1, x, y, e^x)
PfaffianFamily log_graphs(const Rect& U);     // (1, x, y, ln x), U inside x > 0
}  // namespace families

/// Coefficient vector scaled to unit norm with its first nonzero entry positive.
struct FamilyCurve {
  Eigen::VectorXd coeffs;
};

/// Throws InvalidArgument for a zero vector.
FamilyCurve make_family_curve(const Eigen::VectorXd& a);
/// Throws DuplicateCurve if two normalized coefficient vectors agree within 1e-12.
void check_distinct(std::span<const FamilyCurve> curves);

Eigen::VectorXd dual_point(const FamilyCurve& curve);

struct OriginHyperplane {
  Eigen::VectorXd normal;
};

/// normal . x = offset
struct AffineHyperplane {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

/// Normal (m_1(p), ..., m_d(p)). Throws DomainViolation outside U and
/// DegenerateDual when every term vanishes at p.
OriginHyperplane dual_hyperplane(const PfaffianFamily& family, Vec2 p);

struct DualConfig {
  std::vector<Eigen::VectorXd> points;
  std::vector<OriginHyperplane> planes;
};

struct RotatedConfig {
  DualConfig config;
  Eigen::MatrixXd rotation;
  int attempts = 0;  // 0 when the identity was already generic
};

/// Orthogonal change of coordinates after which every point has |z_1| > 1e-9
/// and every normal has |n_1| and |n_2..d| above 1e-9 (relative). The
/// identity is tried first, then QR-of-Gaussian rotations drawn from the
/// seed. Throws RotationFailed after 100 draws.
RotatedConfig generic_rotation(const DualConfig& config, std::uint64_t seed);

struct ProjectedConfig {
  std::vector<Eigen::VectorXd> points;
  std::vector<AffineHyperplane> planes;
};

/// Central projection onto z_1 = 1, written in coordinates z_2..z_d.
ProjectedConfig project_to_pi(const DualConfig& config);

/// Edges (point id, plane id) with |n . z| <= tol |n| |z|.
IncidenceGraph count_dual_incidences(std::span<const Eigen::VectorXd> points,
                                     std::span<const OriginHyperplane> planes, double tol = 1e-9);
/// Edges (point id, plane id) with |n . x - c| <= tol |(n, c)| |(1, x)|, the
/// same test as above read in homogeneous coordinates.
IncidenceGraph count_hyperplane_incidences(std::span<const Eigen::VectorXd> points,
                                           std::span<const AffineHyperplane> planes, double tol = 1e-9);

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Zero set of f on an nx by ny grid over box. Corner values >= 0 count as
/// positive; saddle cells are resolved by the centre value.
std::vector<Segment> marching_squares(const std::function<double(Vec2)>& f, const Rect& box, int nx, int ny);

struct FamilyCountOptions {
  int grid = 1024;
  double tol = 1e-7;
};

/// Primal count. Each curve is traced by marching squares over U; points
/// within one grid cell of the trace are confirmed by |f(p)| / |grad f(p)| <= tol.
IncidenceGraph count_family_incidences(std::span<const Vec2> points, const PfaffianFamily& family,
                                       std::span<const FamilyCurve> curves, const FamilyCountOptions& opts = {});

struct DualityReport {
  std::int64_t primal = 0;
  std::int64_t dual = 0;
  std::int64_t projected = 0;
  bool transpose_ok = true;
  int rotation_attempts = 0;
};

/// The three counts I(P, Gamma), I(Gamma*, P*), I(Gamma', P'), and the check
/// that the dual graph is the primal one with sides exchanged. Throws
/// ChainMismatch naming the first disagreement.
DualityReport verify_duality_chain(std::span<const Vec2> points, const PfaffianFamily& family,
                                   std::span<const FamilyCurve> curves, std::uint64_t seed = 1,
                                   const FamilyCountOptions& opts = {});

/// {"terms": [...], "U": [xmin, xmax, ymin, ymax]}. Terms are objects
/// {"monomial": [i, j]}, {"exp": {"i,j": c, ...}} or {"log": {...}}.
std::string family_to_json(const PfaffianFamily& family);
PfaffianFamily family_from_json(std::string_view text);

struct FamilyScene {
  PfaffianFamily family;
  std::vector<Vec2> points;
  std::vector<FamilyCurve> curves;
};

/// {"family": ..., "points": [[x, y], ...], "curves": [[a_1, ..., a_d], ...]}
std::string family_scene_to_json(const FamilyScene& scene);
FamilyScene family_scene_from_json(std::string_view text);

}  // namespace pfaffinc
