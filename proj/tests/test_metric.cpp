#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hh/geometry.hpp"
#include "hh/sampling.hpp"
#include "hh/solutions.hpp"

using namespace hh;

namespace {

MetricField flat_lorentz() {
  MetricField m;
  m.chart = Chart{{"x0", "x1", "x2", "x3"}, FieldTag::real, {}};
  for (auto& g : m.g) g = Expr::constant(0.0);
  m.g[sym_index(0, 0)] = Expr::constant(1.0);
  m.g[sym_index(1, 1)] = Expr::constant(1.0);
  m.g[sym_index(2, 2)] = Expr::constant(1.0);
  m.g[sym_index(3, 3)] = Expr::constant(-1.0);
  return m;
}

}  // namespace

TEST_CASE("flat metric point data") {
  const MetricPoint mp = metric_at(flat_lorentz(), real_point(0.3, 0.4, 0.5, 0.6));
  CHECK(mp.det == cplx(-1.0));
  for (const cplx& v : mp.dg) CHECK(v == cplx(0.0));
  for (const cplx& v : mp.ddg) CHECK(v == cplx(0.0));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const cplx want = a != b ? 0.0 : (a == 3 ? -1.0 : 1.0);
      CHECK(mp.ginv[a * 4 + b] == want);
    }
}

TEST_CASE("degenerate metric raises") {
  MetricField m = flat_lorentz();
  m.g[sym_index(3, 3)] = Expr::constant(0.0);
  CHECK_THROWS_AS(metric_at(m, real_point(0, 0, 0, 0)), DegenerateMetric);
}

TEST_CASE("key-function metric with W = 0 matches the hand expansion") {
  // ds^2 = phi^-2 (2/tau (d.eta d.w - d.phi d.t) + Lambda/(3 tau^2) dt^2)
  // at phi = 1, Lambda = 3, tau = 1: g_ew = 1, g_pt = -1, g_tt = 1.
  const auto inst = instantiate("desitter_w0");
  const MetricPoint mp = metric_at(inst.metric, real_point(1.0, 0.0, 0.0, 0.0));
  CHECK(std::abs(mp.g[1 * 4 + 3] - cplx(1.0)) < 1e-15);   // eta-w
  CHECK(std::abs(mp.g[0 * 4 + 2] - cplx(-1.0)) < 1e-15);  // phi-t
  CHECK(std::abs(mp.g[2 * 4 + 2] - cplx(1.0)) < 1e-15);   // t-t
  CHECK(mp.g[0 * 4 + 0] == cplx(0.0));
  CHECK(mp.g[1 * 4 + 1] == cplx(0.0));
  CHECK(mp.g[3 * 4 + 3] == cplx(0.0));
  CHECK(mp.g[0 * 4 + 1] == cplx(0.0));
}

TEST_CASE("inverse consistency across the catalog") {
  for (const std::string& id : catalog()) {
    const auto inst = instantiate(id);
    const auto pts =
        sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 100);
    REQUIRE(pts.size() == 100);
    for (const Point& p : pts) {
      const MetricPoint mp = metric_at(inst.metric, p);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          cplx s(0.0);
          for (int c = 0; c < 4; ++c) s += mp.g[a * 4 + c] * mp.ginv[c * 4 + b];
          CHECK(std::abs(s - (a == b ? cplx(1.0) : cplx(0.0))) < 1e-12);
        }
    }
  }
}

TEST_CASE("sampler is deterministic and respects margins") {
  const auto inst = instantiate("desitter_simple_v");
  const auto a = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 25);
  const auto b = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 25);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (int d = 0; d < 4; ++d) CHECK(a[i][d] == b[i][d]);

  // Every sampled point keeps the conformal factor away from zero.
  for (const Point& p : a) {
    const cplx phi = eval_value(inst.metric.chart.singular_loci.at(0), p, inst.metric.params);
    CHECK(std::abs(phi) > 0.1);
  }
}

TEST_CASE("sampler reports hopeless boxes") {
  Chart c{{"a", "b", "c", "d"}, FieldTag::real, {Expr::coordinate(0)}};
  const Box box{{{-0.01, 0.01}, {0, 1}, {0, 1}, {0, 1}}};
  CHECK_THROWS_AS(sample_points(c, box, {}, 10), SingularPoint);
}
