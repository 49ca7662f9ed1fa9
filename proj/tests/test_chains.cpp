#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pfaffinc/chains.hpp"
#include "pfaffinc/errors.hpp"

using namespace pfaffinc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Vec2> grid_points(double x0, double x1, double y0, double y1, int n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) pts.push_back({ux(rng), uy(rng)});
  return pts;
}

}  // namespace

TEST_CASE("worked example chain") {
  const auto pf = chains::worked_example();
  const auto rep = verify_chain(pf.chain, {-2, 2, -2, 2}, 300, 1e-6);
  CHECK(rep.pass);
  CHECK(order_and_degree(pf) == OrderDegree{1, 2, 6});
  CHECK(pf(1.0, 2.0) == doctest::Approx(32.0 - std::exp(4.0)));
}

TEST_CASE("polynomial with empty chain") {
  const auto pf = chains::polynomial_graph(Poly1{1.0, 0.0, 0.0, 2.0});
  CHECK(order_and_degree(pf) == OrderDegree{0, 0, 3});
}

TEST_CASE("cosine chain") {
  const auto pf = chains::cosine();
  const auto pts = grid_points(-std::numbers::pi + 0.01, std::numbers::pi - 0.01, -5, 5, 1000);
  const auto rep = verify_chain(pf.chain, pf.domain, pts, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.max_error <= 1e-6);
  CHECK(order_and_degree(pf).order == 2);
  for (const Vec2 p : pts) CHECK(std::abs(pf(p.x, p.y) - (p.y - std::cos(p.x))) <= 1e-12);
}

TEST_CASE("the unsquared tangent derivative is rejected") {
  auto chain = chains::cosine().chain;
  chain[0].gx = MultiPoly::constant(0.5, 3) + 0.5 * MultiPoly::variable(2, 3);  // (1 + z1) / 2
  const auto rep = verify_chain(chain, chains::cosine().domain, 200, 1e-6);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("wrong derivative for e^x fails with error near one") {
  auto chain = chains::exp_graph().chain;
  chain[0].gx = 2.0 * MultiPoly::variable(2, 3);
  const auto rep = verify_chain(chain, {0.0, 2.0, 0.0, 1.0}, 100, 1e-6);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_error == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("samples outside U are rejected") {
  const std::vector<Vec2> pts{{0.0, 0.0}, {3.5, 0.0}};
  CHECK_THROWS_AS(verify_chain(chains::cosine().chain, chains::cosine().domain, pts, 1e-6), DomainViolation);
}

TEST_CASE("integral of e^x") {
  const auto base = chains::exp_graph();
  const auto pf = extend_with_integral(base, 0.0);
  CHECK(order_and_degree(pf).order == order_and_degree(base).order + 1);
  for (double x : {-2.0, -0.3, 0.0, 0.7, 1.9, 3.3}) {
    const double z = eval_chain(pf.chain, x, 0.4).back();
    CHECK(std::abs(z - (std::exp(x) - 1.0)) <= 1e-8);
    CHECK(std::abs(pf(x, 0.4) - (0.4 - (std::exp(x) - 1.0))) <= 1e-8);
  }
  const auto rep = verify_chain(pf.chain, {-2, 2, -2, 2}, 200, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.links.back().max_error_y <= 1e-10);
}

TEST_CASE("integral of a constant is x") {
  const auto pf = extend_with_integral(chains::polynomial_graph(Poly1{1.0}), 0.0);
  CHECK(order_and_degree(pf).order == 1);
  for (double x : {-1.5, 0.25, 2.0}) CHECK(pf(x, 3.0) == doctest::Approx(3.0 - x));
}

TEST_CASE("integral of e^t / t") {
  const auto pf = extend_with_integral(chains::exp_over_x(0.1), 0.1);
  const auto rep = verify_chain(pf.chain, {0.1, 3.0, -2, 2}, 200, 1e-4);
  CHECK(rep.pass);
  CHECK(rep.links.back().max_error_y <= 1e-10);
  // Ei(2) - Ei(0.1) by independent series: Ei(x) = gamma + ln x + sum x^k / (k k!)
  auto ei = [](double x) {
    double s = 0.5772156649015329 + std::log(x), term = 1.0;
    for (int k = 1; k < 60; ++k) {
      term *= x / k;
      s += term / k;
    }
    return s;
  };
  CHECK(std::abs(eval_chain(pf.chain, 2.0, 0.0).back() - (ei(2.0) - ei(0.1))) <= 1e-8);
}

TEST_CASE("extend_with_integral needs y - h(x)") {
  CHECK_THROWS_AS(extend_with_integral(chains::worked_example(), 0.0), NotUnivariateForm);
  PfaffianFunction twice = chains::exp_graph();
  twice.g = 2.0 * twice.g;
  CHECK_THROWS_AS(extend_with_integral(twice, 0.0), NotUnivariateForm);
}

TEST_CASE("chain JSON round trip") {
  for (const auto& pf : {chains::worked_example(), chains::cosine(), extend_with_integral(chains::exp_over_x(0.1), 0.1)}) {
    const auto back = chain_from_json(chain_to_json(pf));
    REQUIRE(back.chain.size() == pf.chain.size());
    CHECK(back.g == pf.g);
    CHECK(back.domain == pf.domain);
    for (std::size_t i = 0; i < pf.chain.size(); ++i) {
      CHECK(back.chain[i].gx == pf.chain[i].gx);
      CHECK(back.chain[i].gy == pf.chain[i].gy);
    }
    CHECK(back(0.5, 0.25) == doctest::Approx(pf(0.5, 0.25)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(chain_from_json("{not json"), FormatError);
}
