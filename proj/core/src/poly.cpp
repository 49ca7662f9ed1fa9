#include "pfaffinc/poly.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "pfaffinc/errors.hpp"

namespace pfaffinc {

namespace {

double ipow(double b, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

std::vector<double> binomial_row(int n) {
  std::vector<double> row(n + 1, 1.0);
  for (int k = 1; k < n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
  return row;
}

}  // namespace

// ---------------------------------------------------------------- Poly1

void Poly1::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Poly1::operator()(double t) const {
  double r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
  return r;
}

Poly1 Poly1::derivative() const {
  std::vector<double> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(static_cast<double>(k) * c_[k]);
  return Poly1(std::move(d));
}

// ---------------------------------------------------------------- Poly2

Poly2::Poly2(std::initializer_list<std::pair<const Exponent, double>> terms) {
  for (const auto& [e, c] : terms) add_term(e.first, e.second, c);
}

Poly2 Poly2::constant(double c) {
  Poly2 p;
  p.add_term(0, 0, c);
  return p;
}

Poly2 Poly2::x() { return Poly2{{{1, 0}, 1.0}}; }
Poly2 Poly2::y() { return Poly2{{{0, 1}, 1.0}}; }

Poly2 Poly2::in_x(const Poly1& p) {
  Poly2 r;
  for (int k = 0; k <= p.degree() && !p.is_zero(); ++k) r.add_term(k, 0, p.coeffs()[k]);
  return r;
}

Poly2 Poly2::in_y(const Poly1& p) {
  Poly2 r;
  for (int k = 0; k <= p.degree() && !p.is_zero(); ++k) r.add_term(0, k, p.coeffs()[k]);
  return r;
}

void Poly2::add_term(int i, int j, double c) {
  if (i < 0 || j < 0) throw InvalidArgument("negative exponent");
  if (c == 0.0) return;
  const double v = (terms_[{i, j}] += c);
  if (v == 0.0) terms_.erase({i, j});
}

double Poly2::operator()(double x, double y) const {
  double r = 0.0;
  for (const auto& [e, c] : terms_) r += c * ipow(x, e.first) * ipow(y, e.second);
  return r;
}

int Poly2::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

bool Poly2::depends_on_x() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.first > 0; });
}

bool Poly2::depends_on_y() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.second > 0; });
}

Poly2 Poly2::dx() const {
  Poly2 r;
  for (const auto& [e, c] : terms_)
    if (e.first > 0) r.add_term(e.first - 1, e.second, c * e.first);
  return r;
}

Poly2 Poly2::dy() const {
  Poly2 r;
  for (const auto& [e, c] : terms_)
    if (e.second > 0) r.add_term(e.first, e.second - 1, c * e.second);
  return r;
}

Poly2 Poly2::substitute_linear(const Mat2& m) const {
  // (a1 x + a2 y)^i (a3 x + a4 y)^j expanded binomially.
  Poly2 r;
  for (const auto& [e, c] : terms_) {
    const auto [i, j] = e;
    const auto bi = binomial_row(i);
    const auto bj = binomial_row(j);
    for (int p = 0; p <= i; ++p) {
      const double cp = bi[p] * ipow(m.a1, p) * ipow(m.a2, i - p);
      if (cp == 0.0) continue;
      for (int q = 0; q <= j; ++q) {
        const double cq = bj[q] * ipow(m.a3, q) * ipow(m.a4, j - q);
        if (cq == 0.0) continue;
        r.add_term(p + q, (i - p) + (j - q), c * cp * cq);
      }
    }
  }
  return r;
}

Poly1 Poly2::as_poly_in_y() const {
  if (depends_on_x()) throw InvalidArgument("polynomial depends on x");
  std::vector<double> c(degree() + 1, 0.0);
  for (const auto& [e, v] : terms_) c[e.second] = v;
  return Poly1(std::move(c));
}

Poly2 operator+(const Poly2& a, const Poly2& b) {
  Poly2 r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e.first, e.second, c);
  return r;
}

Poly2 operator-(const Poly2& a, const Poly2& b) { return a + (-1.0) * b; }

Poly2 operator*(const Poly2& a, const Poly2& b) {
  Poly2 r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
  return r;
}

Poly2 operator*(double s, const Poly2& a) {
  Poly2 r;
  for (const auto& [e, c] : a.terms_) r.add_term(e.first, e.second, s * c);
  return r;
}

std::string Poly2::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    if (e.first) os << "*x^" << e.first;
    if (e.second) os << "*y^" << e.second;
  }
  return os.str();
}

// ---------------------------------------------------------------- MultiPoly

MultiPoly MultiPoly::from_poly2(const Poly2& p, int nvars) {
  if (nvars < 2) throw InvalidArgument("MultiPoly needs at least x and y");
  MultiPoly r(nvars);
  for (const auto& [e, c] : p.terms()) {
    Exponent ex(nvars, 0);
    ex[0] = e.first;
    ex[1] = e.second;
    r.add_term(std::move(ex), c);
  }
  return r;
}

MultiPoly MultiPoly::constant(double c, int nvars) {
  MultiPoly r(nvars);
  r.add_term(Exponent(nvars, 0), c);
  return r;
}

MultiPoly MultiPoly::variable(int var, int nvars) {
  if (var < 0 || var >= nvars) throw InvalidArgument("variable index out of range");
  MultiPoly r(nvars);
  Exponent e(nvars, 0);
  e[var] = 1;
  r.add_term(std::move(e), 1.0);
  return r;
}

int MultiPoly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

bool MultiPoly::depends_on(int var) const {
  return std::any_of(terms_.begin(), terms_.end(), [var](const auto& t) { return t.first[var] > 0; });
}

void MultiPoly::add_term(Exponent e, double c) {
  if (static_cast<int>(e.size()) != nvars_) throw InvalidArgument("exponent arity mismatch");
  if (std::any_of(e.begin(), e.end(), [](int k) { return k < 0; }))
    throw InvalidArgument("negative exponent");
  if (c == 0.0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(std::move(e), c);
  } else if ((it->second += c) == 0.0) {
    terms_.erase(it);
  }
}

double MultiPoly::operator()(std::span<const double> vars) const {
  if (static_cast<int>(vars.size()) < nvars_) throw InvalidArgument("too few variable values");
  double r = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int k = 0; k < nvars_; ++k)
      if (e[k]) t *= ipow(vars[k], e[k]);
    r += t;
  }
  return r;
}

MultiPoly MultiPoly::lifted(int nvars) const {
  if (nvars < nvars_) throw InvalidArgument("cannot drop variables");
  MultiPoly r(nvars);
  for (const auto& [e, c] : terms_) {
    Exponent ex = e;
    ex.resize(nvars, 0);
    r.add_term(std::move(ex), c);
  }
  return r;
}

MultiPoly MultiPoly::derivative(int var) const {
  MultiPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent ex = e;
    ex[var] -= 1;
    r.add_term(std::move(ex), c * e[var]);
  }
  return r;
}

namespace {
MultiPoly combine(const MultiPoly& a, const MultiPoly& b, double sign) {
  const int n = std::max(a.nvars(), b.nvars());
  MultiPoly r = a.lifted(n);
  const MultiPoly lb = b.lifted(n);
  for (const auto& [e, c] : lb.terms()) r.add_term(e, sign * c);
  return r;
}
}  // namespace

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return combine(a, b, 1.0); }
MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return combine(a, b, -1.0); }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  const int n = std::max(a.nvars_, b.nvars_);
  const MultiPoly la = a.lifted(n), lb = b.lifted(n);
  MultiPoly r(n);
  for (const auto& [ea, ca] : la.terms_)
    for (const auto& [eb, cb] : lb.terms_) {
      MultiPoly::Exponent e(n);
      for (int k = 0; k < n; ++k) e[k] = ea[k] + eb[k];
      r.add_term(std::move(e), ca * cb);
    }
  return r;
}

MultiPoly operator*(double s, const MultiPoly& a) {
  MultiPoly r(a.nvars_);
  for (const auto& [e, c] : a.terms_) r.add_term(e, s * c);
  return r;
}

}  // namespace pfaffinc
