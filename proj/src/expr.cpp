#include "hh/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace hh {

namespace {

std::shared_ptr<const Expr::Node> make_node(Expr::Node&& n) {
  return std::make_shared<const Expr::Node>(std::move(n));
}

bool const_value(const Expr& e, cplx* out) { return e.valid() && e.is_constant(out); }

bool is_const_equal(const Expr& e, double c) {
  cplx v;
  return const_value(e, &v) && v == cplx(c);
}

// Detects small integer constants so powers take the branch-free path.
bool as_small_int(cplx c, int* out) {
  if (std::abs(c.imag()) > 1e-12) return false;
  const double r = std::round(c.real());
  if (std::abs(c.real() - r) > 1e-12 || std::abs(r) > 64.0) return false;
  *out = static_cast<int>(r);
  return true;
}

}  // namespace

Expr Expr::constant(cplx c) {
  Expr::Node n;
  n.kind = ExprKind::Constant;
  n.value = c;
  return Expr(make_node(std::move(n)));
}

Expr Expr::coordinate(int index) {
  Expr::Node n;
  n.kind = ExprKind::Coord;
  n.coord = index;
  return Expr(make_node(std::move(n)));
}

Expr Expr::parameter(std::string name) {
  Expr::Node n;
  n.kind = ExprKind::Param;
  n.param = std::move(name);
  return Expr(make_node(std::move(n)));
}

bool Expr::is_constant(cplx* out) const {
  if (!valid() || n_->kind != ExprKind::Constant) return false;
  if (out) *out = n_->value;
  return true;
}

bool Expr::is_zero() const {
  cplx v;
  return is_constant(&v) && v == cplx(0.0);
}

Expr operator+(const Expr& a, const Expr& b) {
  cplx ca, cb;
  if (const_value(a, &ca) && const_value(b, &cb)) return Expr::constant(ca + cb);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Expr::Node n;
  n.kind = ExprKind::Add;
  n.a = a;
  n.b = b;
  return Expr(make_node(std::move(n)));
}

Expr operator-(const Expr& a, const Expr& b) {
  cplx ca, cb;
  if (const_value(a, &ca) && const_value(b, &cb)) return Expr::constant(ca - cb);
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.ptr() == b.ptr()) return Expr::constant(0.0);
  Expr::Node n;
  n.kind = ExprKind::Sub;
  n.a = a;
  n.b = b;
  return Expr(make_node(std::move(n)));
}

Expr operator*(const Expr& a, const Expr& b) {
  cplx ca, cb;
  if (const_value(a, &ca) && const_value(b, &cb)) return Expr::constant(ca * cb);
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (is_const_equal(a, 1.0)) return b;
  if (is_const_equal(b, 1.0)) return a;
  Expr::Node n;
  n.kind = ExprKind::Mul;
  n.a = a;
  n.b = b;
  return Expr(make_node(std::move(n)));
}

Expr operator/(const Expr& a, const Expr& b) {
  cplx ca, cb;
  if (const_value(a, &ca) && const_value(b, &cb) && std::abs(cb) > 1e-300)
    return Expr::constant(ca / cb);
  if (a.is_zero()) return Expr::constant(0.0);
  if (is_const_equal(b, 1.0)) return a;
  Expr::Node n;
  n.kind = ExprKind::Div;
  n.a = a;
  n.b = b;
  return Expr(make_node(std::move(n)));
}

Expr operator-(const Expr& a) {
  cplx ca;
  if (const_value(a, &ca)) return Expr::constant(-ca);
  if (a.node().kind == ExprKind::Neg) return a.node().a;
  Expr::Node n;
  n.kind = ExprKind::Neg;
  n.a = a;
  return Expr(make_node(std::move(n)));
}

Expr exp(const Expr& a) {
  cplx ca;
  if (const_value(a, &ca)) return Expr::constant(std::exp(ca));
  Expr::Node n;
  n.kind = ExprKind::Exp;
  n.a = a;
  return Expr(make_node(std::move(n)));
}

Expr ln(const Expr& a) {
  cplx ca;
  if (const_value(a, &ca) && std::abs(ca) > 1e-12) return Expr::constant(std::log(ca));
  Expr::Node n;
  n.kind = ExprKind::Ln;
  n.a = a;
  return Expr(make_node(std::move(n)));
}

Expr sqrt(const Expr& a) {
  cplx ca;
  if (const_value(a, &ca) && std::abs(ca) > 1e-12) return Expr::constant(std::sqrt(ca));
  Expr::Node n;
  n.kind = ExprKind::Sqrt;
  n.a = a;
  return Expr(make_node(std::move(n)));
}

Expr pow(const Expr& a, const Expr& b) {
  cplx cb;
  if (const_value(b, &cb)) {
    if (cb == cplx(0.0)) return Expr::constant(1.0);
    if (cb == cplx(1.0)) return a;
    cplx ca;
    int k;
    if (const_value(a, &ca) && std::abs(ca) > 1e-12) {
      if (as_small_int(cb, &k)) return Expr::constant(detail::ipow(ca, k));
      return Expr::constant(std::pow(ca, cb));
    }
    Expr::Node n;
    n.kind = ExprKind::Pow;
    n.a = a;
    n.b = b;
    if (as_small_int(cb, &k)) {
      n.has_ipow = true;
      n.ipow_exp = k;
    }
    return Expr(make_node(std::move(n)));
  }
  Expr::Node n;
  n.kind = ExprKind::Pow;
  n.a = a;
  n.b = b;
  return Expr(make_node(std::move(n)));
}

Expr pow(const Expr& a, double c) { return pow(a, Expr::constant(c)); }

Expr Expr::diff(int coord) const {
  const Node& nd = *n_;
  switch (nd.kind) {
    case ExprKind::Constant:
    case ExprKind::Param:
      return constant(0.0);
    case ExprKind::Coord:
      return constant(nd.coord == coord ? 1.0 : 0.0);
    case ExprKind::Neg:
      return -nd.a.diff(coord);
    case ExprKind::Exp:
      return *this * nd.a.diff(coord);
    case ExprKind::Ln:
      return nd.a.diff(coord) / nd.a;
    case ExprKind::Sqrt:
      return nd.a.diff(coord) / (constant(2.0) * *this);
    case ExprKind::Add:
      return nd.a.diff(coord) + nd.b.diff(coord);
    case ExprKind::Sub:
      return nd.a.diff(coord) - nd.b.diff(coord);
    case ExprKind::Mul:
      return nd.a.diff(coord) * nd.b + nd.a * nd.b.diff(coord);
    case ExprKind::Div:
      return (nd.a.diff(coord) * nd.b - nd.a * nd.b.diff(coord)) / (nd.b * nd.b);
    case ExprKind::Pow: {
      cplx cb;
      if (nd.b.is_constant(&cb)) {
        // d(u^c) = c u^(c-1) u'; avoids introducing a log node.
        return nd.b * pow(nd.a, nd.b - constant(1.0)) * nd.a.diff(coord);
      }
      return *this * (nd.b.diff(coord) * ln(nd.a) + nd.b * nd.a.diff(coord) / nd.a);
    }
  }
  throw Error("corrupt expression node");
}

Expr Expr::substitute(const std::array<Expr, 4>& map) const {
  const Node& nd = *n_;
  switch (nd.kind) {
    case ExprKind::Constant:
    case ExprKind::Param:
      return *this;
    case ExprKind::Coord:
      return map[static_cast<size_t>(nd.coord)];
    case ExprKind::Neg:
      return -nd.a.substitute(map);
    case ExprKind::Exp:
      return exp(nd.a.substitute(map));
    case ExprKind::Ln:
      return ln(nd.a.substitute(map));
    case ExprKind::Sqrt:
      return sqrt(nd.a.substitute(map));
    case ExprKind::Add:
      return nd.a.substitute(map) + nd.b.substitute(map);
    case ExprKind::Sub:
      return nd.a.substitute(map) - nd.b.substitute(map);
    case ExprKind::Mul:
      return nd.a.substitute(map) * nd.b.substitute(map);
    case ExprKind::Div:
      return nd.a.substitute(map) / nd.b.substitute(map);
    case ExprKind::Pow:
      return pow(nd.a.substitute(map), nd.b.substitute(map));
  }
  throw Error("corrupt expression node");
}

namespace {

std::string format_const(cplx c) {
  char buf[64];
  if (c.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", c.real());
    return buf;
  }
  std::snprintf(buf, sizeof buf, "complex(%.17g,%.17g)", c.real(), c.imag());
  return buf;
}

}  // namespace

std::string Expr::str() const {
  const Node& nd = *n_;
  switch (nd.kind) {
    case ExprKind::Constant:
      return format_const(nd.value);
    case ExprKind::Coord:
      return "#" + std::to_string(nd.coord);
    case ExprKind::Param:
      return nd.param;
    case ExprKind::Neg:
      return "(-" + nd.a.str() + ")";
    case ExprKind::Exp:
      return "exp(" + nd.a.str() + ")";
    case ExprKind::Ln:
      return "ln(" + nd.a.str() + ")";
    case ExprKind::Sqrt:
      return "sqrt(" + nd.a.str() + ")";
    case ExprKind::Add:
      return "(" + nd.a.str() + " + " + nd.b.str() + ")";
    case ExprKind::Sub:
      return "(" + nd.a.str() + " - " + nd.b.str() + ")";
    case ExprKind::Mul:
      return "(" + nd.a.str() + " * " + nd.b.str() + ")";
    case ExprKind::Div:
      return "(" + nd.a.str() + " / " + nd.b.str() + ")";
    case ExprKind::Pow:
      return "(" + nd.a.str() + "^" + nd.b.str() + ")";
  }
  return "?";
}

void collect_branch_loci(const Expr& e, std::vector<Expr>& out) {
  const Expr::Node& nd = e.node();
  switch (nd.kind) {
    case ExprKind::Constant:
    case ExprKind::Coord:
    case ExprKind::Param:
      return;
    case ExprKind::Ln:
    case ExprKind::Sqrt:
      out.push_back(nd.a);
      collect_branch_loci(nd.a, out);
      return;
    case ExprKind::Div:
      out.push_back(nd.b);
      collect_branch_loci(nd.a, out);
      collect_branch_loci(nd.b, out);
      return;
    case ExprKind::Pow: {
      if (!nd.has_ipow || nd.ipow_exp < 0) out.push_back(nd.a);
      collect_branch_loci(nd.a, out);
      if (nd.b.valid()) collect_branch_loci(nd.b, out);
      return;
    }
    case ExprKind::Neg:
    case ExprKind::Exp:
      collect_branch_loci(nd.a, out);
      return;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
      collect_branch_loci(nd.a, out);
      collect_branch_loci(nd.b, out);
      return;
  }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& src;
  const std::array<std::string, 4>& coords;
  size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at offset " + std::to_string(pos) + " in \"" + src + "\"");
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (eat('+'))
        lhs = lhs + parse_product();
      else if (eat('-'))
        lhs = lhs - parse_product();
      else
        return lhs;
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (eat('*'))
        lhs = lhs * parse_unary();
      else if (eat('/'))
        lhs = lhs / parse_unary();
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (eat('-')) return -parse_unary();
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (eat('^')) return pow(base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input");
    const char c = src[pos];
    if (c == '(') {
      ++pos;
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const char* begin = src.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos += static_cast<size_t>(end - begin);
    return Expr::constant(v);
  }

  Expr parse_ident() {
    const size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    const std::string name = src.substr(start, pos - start);
    if (name == "exp" || name == "ln" || name == "sqrt") {
      if (!eat('(')) fail("expected '(' after " + name);
      Expr arg = parse_sum();
      if (!eat(')')) fail("expected ')'");
      if (name == "exp") return exp(arg);
      if (name == "ln") return ln(arg);
      return sqrt(arg);
    }
    for (int i = 0; i < 4; ++i)
      if (name == coords[static_cast<size_t>(i)]) return Expr::coordinate(i);
    return Expr::parameter(name);
  }
};

}  // namespace

Expr parse_expr(const std::string& text, const std::array<std::string, 4>& coord_names) {
  Parser p{text, coord_names};
  Expr e = p.parse_sum();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

}  // namespace hh
