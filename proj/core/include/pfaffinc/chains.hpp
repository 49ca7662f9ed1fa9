#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pfaffinc/geometry.hpp"
#include "pfaffinc/poly.hpp"

namespace pfaffinc {

enum class NodeKind {
  Polynomial,  // f = p(x, y)
  ExpOfPoly,   // f = exp(p(x, y))
  Reciprocal,  // f = 1 / p(x, y)
  TanHalf,     // f = tan(x / 2)
  CosSqHalf,   // f = cos^2(x / 2)
  Integral,    // f = integral from c to x of gx(t, ., f_1(t), ...)
};

std::string_view to_string(NodeKind kind);
NodeKind node_kind_from_string(std::string_view name);

struct IntegralData;

/// One member f_i of a chain. gx and gy are polynomials in
/// (x, y, z_1, ..., z_i); the defining property is df_i/dx = gx and
/// df_i/dy = gy after substituting z_j = f_j.
struct ChainLink {
  NodeKind kind = NodeKind::Polynomial;
  Poly2 poly;          // Polynomial, ExpOfPoly, Reciprocal
  int ref = -1;        // CosSqHalf: index of the tan(x/2) link
  double lower = 0.0;  // Integral: lower limit c
  MultiPoly gx;
  MultiPoly gy;
  std::shared_ptr<const IntegralData> integral;
};

using Chain = std::vector<ChainLink>;

/// Values (f_1, ..., f_r) at (x, y).
std::vector<double> eval_chain(const Chain& chain, double x, double y);

namespace links {
/// Links appended at position `index` (0-based) of a chain, with the correct
/// gx, gy for that position.
ChainLink polynomial(const Poly2& p, int index);
ChainLink exp_of_poly(const Poly2& p, int index);
ChainLink reciprocal(const Poly2& p, int index);
ChainLink tan_half(int index);
ChainLink cos_sq_half(int tan_index, int index);
}  // namespace links

/// f = g(x, y, f_1, ..., f_r) on the open rectangle U (infinite sides allowed).
struct PfaffianFunction {
  Chain chain;
  MultiPoly g;
  Rect domain;

  double operator()(double x, double y) const;
};

struct LinkError {
  double max_error_x = 0.0;
  double max_error_y = 0.0;
  Vec2 worst;
};

struct ChainReport {
  std::vector<LinkError> links;
  double max_error = 0.0;
  int samples = 0;
  bool pass = true;
};

/// Compares Ridders-extrapolated central differences of every link with its
/// gx, gy. Error is |numeric - g| / max(1, |numeric|). Throws DomainViolation
/// if a point is not inside the open domain.
ChainReport verify_chain(const Chain& chain, const Rect& domain, std::span<const Vec2> points, double tol);
/// Same, at `samples` uniform points of the domain (infinite sides are cut to
/// [-10, 10]).
ChainReport verify_chain(const Chain& chain, const Rect& domain, int samples, double tol,
                         std::uint64_t seed = 1);

struct OrderDegree {
  int order = 0;
  int chain_degree = 0;
  int g_degree = 0;
  friend bool operator==(const OrderDegree&, const OrderDegree&) = default;
};

OrderDegree order_and_degree(const PfaffianFunction& pf);

/// For pf = y - h1(x), returns y - integral from c to x of h1, with the
/// antiderivative appended as a new link. Throws NotUnivariateForm otherwise.
PfaffianFunction extend_with_integral(const PfaffianFunction& pf, double c);

namespace chains {
/// x y^5 - e^{x^2 + 3x}.
PfaffianFunction worked_example();
/// y - cos x on -pi < x < pi via tan(x/2) and cos^2(x/2).
PfaffianFunction cosine();
/// y - h(x) for a univariate polynomial h, with an empty chain.
PfaffianFunction polynomial_graph(const Poly1& h);
/// y - e^x.
PfaffianFunction exp_graph();
/// y - e^x / x on x > 0 via e^x and 1/x.
PfaffianFunction exp_over_x(double xmin);
}  // namespace chains

std::string chain_to_json(const PfaffianFunction& pf);
PfaffianFunction chain_from_json(std::string_view text);

}  // namespace pfaffinc
