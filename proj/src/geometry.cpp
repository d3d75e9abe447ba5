#include "hh/geometry.hpp"

#include <cmath>

#include "hh/errors.hpp"

namespace hh {

cplx eval_value(const Expr& e, const Point& point, const Params& params) {
  return e.eval<cplx>(point, params);
}

bool Chart::is_admissible(const Point& p, const Params& params) const {
  for (const Expr& locus : singular_loci) {
    if (std::abs(eval_value(locus, p, params)) <= 1e-6) return false;
  }
  return true;
}

void Chart::require_admissible(const Point& p, const Params& params) const {
  for (const Expr& locus : singular_loci) {
    if (std::abs(eval_value(locus, p, params)) <= 1e-6)
      throw SingularPoint("locus " + locus.str() + " within 1e-6 of zero");
  }
}

Jet2 eval_jet(const Expr& e, const Chart& chart, const Point& point, const Params& params) {
  chart.require_admissible(point, params);
  std::array<Jet2, 4> x;
  for (int i = 0; i < 4; ++i) x[static_cast<size_t>(i)] = Jet2::seed(point[static_cast<size_t>(i)], i);
  return e.eval<Jet2>(x, params);
}

MetricPoint metric_at(const MetricField& m, const Point& point) {
  m.chart.require_admissible(point, m.params);
  std::array<Jet2, 4> x;
  for (int i = 0; i < 4; ++i) x[static_cast<size_t>(i)] = Jet2::seed(point[static_cast<size_t>(i)], i);

  std::array<Jet2, 10> comp;
  for (int k = 0; k < 10; ++k) comp[static_cast<size_t>(k)] = m.g[static_cast<size_t>(k)].eval<Jet2>(x, m.params);

  MetricPoint out{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Jet2& j = comp[static_cast<size_t>(sym_index(a, b))];
      out.g[static_cast<size_t>(a * 4 + b)] = j.v;
      for (int c = 0; c < 4; ++c) out.dg[static_cast<size_t>(c * 16 + a * 4 + b)] = j.d[static_cast<size_t>(c)];
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          out.ddg[static_cast<size_t>((c * 4 + d) * 16 + a * 4 + b)] = j.h[static_cast<size_t>(sym_index(c, d))];
    }

  out.scale = 0.0;
  for (const cplx& v : out.g) out.scale = std::max(out.scale, std::abs(v));
  if (out.scale == 0.0) throw DegenerateMetric("all metric components vanish");

  out.det = invert4(out.g, out.ginv);
  const double s4 = out.scale * out.scale * out.scale * out.scale;
  if (std::abs(out.det) < 1e-12 * s4)
    throw DegenerateMetric("determinant below 1e-12 relative to scale");
  return out;
}

}  // namespace hh
