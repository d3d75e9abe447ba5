#pragma once

#include <array>
#include <string>
#include <vector>

#include "hh/expr.hpp"
#include "hh/jet.hpp"
#include "hh/linalg.hpp"

namespace hh {

using Point = std::array<cplx, 4>;
using Box = std::array<std::array<double, 2>, 4>;  // per-coordinate [lo, hi]

enum class FieldTag { real, complex };

// A coordinate chart: four labels, the scalar field the metric components
// live in, and the loci that must stay away from zero for a point to be
// admissible.
struct Chart {
  std::array<std::string, 4> names;
  FieldTag field_tag = FieldTag::complex;
  std::vector<Expr> singular_loci;

  int coord_index(const std::string& name) const {
    for (int i = 0; i < 4; ++i)
      if (names[static_cast<size_t>(i)] == name) return i;
    return -1;
  }

  // Admissible points keep every singular locus at magnitude > 1e-6.
  void require_admissible(const Point& p, const Params& params) const;
  bool is_admissible(const Point& p, const Params& params) const;
};

// Value and exact first/second partials of e at a point, by jet arithmetic.
Jet2 eval_jet(const Expr& e, const Chart& chart, const Point& point, const Params& params);

// Plain value, no admissibility check (internal helper for loci themselves).
cplx eval_value(const Expr& e, const Point& point, const Params& params);

// Symmetric metric field on a chart: ten component expressions, parameter
// bindings, and an orientation for the volume form.
struct MetricField {
  Chart chart;
  std::array<Expr, 10> g;  // packed upper triangle, see sym_index
  Params params;
  int orientation = +1;

  const Expr& component(int a, int b) const { return g[static_cast<size_t>(sym_index(a, b))]; }
};

// Pointwise metric data: components, their exact first and second
// derivatives, the inverse, and the determinant.
struct MetricPoint {
  CMat4 g;                      // g[a*4+b]
  std::array<cplx, 64> dg;      // dg[c*16 + a*4 + b] = d_c g_ab
  std::array<cplx, 256> ddg;    // ddg[(c*4+d)*16 + a*4 + b] = d_c d_d g_ab
  CMat4 ginv;
  cplx det;
  double scale = 0.0;           // max |g_ab|

  cplx d(int c, int a, int b) const { return dg[static_cast<size_t>(c * 16 + a * 4 + b)]; }
  cplx dd(int c, int d_, int a, int b) const {
    return ddg[static_cast<size_t>((c * 4 + d_) * 16 + a * 4 + b)];
  }
};

// Evaluates all metric components at a point. Throws DegenerateMetric when
// |det| < 1e-12 relative to scale^4, SingularPoint off the admissible region.
MetricPoint metric_at(const MetricField& m, const Point& point);

inline Point real_point(double a, double b, double c, double d) {
  return Point{cplx(a), cplx(b), cplx(c), cplx(d)};
}

}  // namespace hh
