#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hh/errors.hpp"
#include "hh/jet.hpp"

namespace hh {

// Parameter bindings (cosmological constant, tau, family constants, ...).
using Params = std::map<std::string, cplx>;

enum class ExprKind : std::uint8_t {
  Constant,
  Coord,
  Param,
  Neg,
  Exp,
  Ln,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

// Immutable closed-form scalar expression over four chart coordinates and
// named parameters. Value semantics; nodes are shared and never mutated.
// Closed under differentiation and substitution.
class Expr {
 public:
  struct Node;

  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  bool valid() const { return n_ != nullptr; }
  const Node& node() const { return *n_; }
  const std::shared_ptr<const Node>& ptr() const { return n_; }

  static Expr constant(cplx c);
  static Expr constant(double c) { return constant(cplx(c)); }
  static Expr coordinate(int index);
  static Expr parameter(std::string name);

  // Exact partial derivative with respect to chart coordinate `coord`.
  Expr diff(int coord) const;

  // Replace each coordinate i by map[i] (an expression over the new chart).
  Expr substitute(const std::array<Expr, 4>& map) const;

  bool is_constant(cplx* out = nullptr) const;
  bool is_zero() const;

  std::string str() const;

  template <class S>
  S eval(const std::array<S, 4>& x, const Params& params) const;

 private:
  std::shared_ptr<const Node> n_;
};

struct Expr::Node {
  ExprKind kind;
  cplx value{};         // Constant
  int coord = -1;       // Coord
  std::string param;    // Param
  Expr a, b;            // children
  bool has_ipow = false;
  int ipow_exp = 0;     // Pow with small integer constant exponent
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sqrt(const Expr& a);
Expr pow(const Expr& a, const Expr& b);
Expr pow(const Expr& a, double c);

inline Expr operator+(const Expr& a, double c) { return a + Expr::constant(c); }
inline Expr operator+(double c, const Expr& a) { return Expr::constant(c) + a; }
inline Expr operator-(const Expr& a, double c) { return a - Expr::constant(c); }
inline Expr operator-(double c, const Expr& a) { return Expr::constant(c) - a; }
inline Expr operator*(const Expr& a, double c) { return a * Expr::constant(c); }
inline Expr operator*(double c, const Expr& a) { return Expr::constant(c) * a; }
inline Expr operator/(const Expr& a, double c) { return a / Expr::constant(c); }
inline Expr operator/(double c, const Expr& a) { return Expr::constant(c) / a; }

// Parses the on-disk expression grammar. Identifiers matching a chart
// coordinate become coordinate references, everything else a parameter.
// Grammar: + - * / ^, functions exp, ln, sqrt, parentheses, decimal numbers.
Expr parse_expr(const std::string& text, const std::array<std::string, 4>& coord_names);

// Arguments of ln/sqrt and bases of non-integer powers; used as singular
// loci so samplers stay away from zeros and branch cuts.
void collect_branch_loci(const Expr& e, std::vector<Expr>& out);

namespace detail {

template <class T>
std::complex<T> ipow(std::complex<T> a, int n) {
  if (n == 0) return std::complex<T>(1);
  const bool neg = n < 0;
  unsigned m = neg ? static_cast<unsigned>(-(long long)n) : static_cast<unsigned>(n);
  std::complex<T> acc(1), base = a;
  while (m) {
    if (m & 1u) acc *= base;
    base *= base;
    m >>= 1;
  }
  if (neg) {
    if (mag(acc) < 1e-12) throw SingularPoint("division by value within 1e-12 of zero");
    return std::complex<T>(1) / acc;
  }
  return acc;
}

inline Jet2 ipow(const Jet2& a, int n) { return hh::ipow(a, n); }

template <class T>
std::complex<T> pow_const(const std::complex<T>& a, cplx c) {
  if (mag(a) < 1e-12) throw SingularPoint("pow base within 1e-12 of zero");
  return std::pow(a, std::complex<T>(c.real(), c.imag()));
}

inline Jet2 pow_const(const Jet2& a, cplx c) { return hh::pow(a, c); }

template <class S>
S from_cplx(cplx c) {
  return S(c);
}

}  // namespace detail

template <class S>
S Expr::eval(const std::array<S, 4>& x, const Params& params) const {
  using std::exp;
  using std::log;
  using std::pow;
  using std::sqrt;
  const Node& nd = *n_;
  switch (nd.kind) {
    case ExprKind::Constant:
      return detail::from_cplx<S>(nd.value);
    case ExprKind::Coord:
      return x[static_cast<size_t>(nd.coord)];
    case ExprKind::Param: {
      auto it = params.find(nd.param);
      if (it == params.end()) throw UnboundParameter(nd.param);
      return detail::from_cplx<S>(it->second);
    }
    case ExprKind::Neg:
      return -nd.a.eval(x, params);
    case ExprKind::Exp:
      return exp(nd.a.eval(x, params));
    case ExprKind::Ln: {
      S u = nd.a.eval(x, params);
      if (mag(u) < 1e-12) throw SingularPoint("log of value within 1e-12 of zero");
      return log(u);
    }
    case ExprKind::Sqrt: {
      S u = nd.a.eval(x, params);
      if (mag(u) < 1e-12) throw SingularPoint("sqrt of value within 1e-12 of zero");
      return sqrt(u);
    }
    case ExprKind::Add:
      return nd.a.eval(x, params) + nd.b.eval(x, params);
    case ExprKind::Sub:
      return nd.a.eval(x, params) - nd.b.eval(x, params);
    case ExprKind::Mul:
      return nd.a.eval(x, params) * nd.b.eval(x, params);
    case ExprKind::Div: {
      S u = nd.a.eval(x, params);
      S w = nd.b.eval(x, params);
      if (mag(w) < 1e-12) throw SingularPoint("division by value within 1e-12 of zero");
      return u / w;
    }
    case ExprKind::Pow: {
      S u = nd.a.eval(x, params);
      if (nd.has_ipow) return detail::ipow(u, nd.ipow_exp);
      cplx c;
      if (nd.b.is_constant(&c)) return detail::pow_const(u, c);
      if (mag(u) < 1e-12) throw SingularPoint("pow base within 1e-12 of zero");
      return exp(nd.b.eval(x, params) * log(u));
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace hh
