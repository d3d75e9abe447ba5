#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hh/killing.hpp"
#include "hh/sampling.hpp"
#include "hh/solutions.hpp"

using namespace hh;

namespace {

Expr C(double v) { return Expr::constant(v); }

KillingField axis(int i) {
  KillingField k{{C(0.0), C(0.0), C(0.0), C(0.0)}};
  k.components[static_cast<size_t>(i)] = C(1.0);
  return k;
}

MetricField flat_euclid() {
  MetricField m;
  m.chart = Chart{{"x", "y", "z", "w"}, FieldTag::real, {}};
  for (auto& g : m.g) g = C(0.0);
  for (int i = 0; i < 4; ++i) m.g[sym_index(i, i)] = C(1.0);
  return m;
}

}  // namespace

TEST_CASE("kappa calibration closes on both anchors") {
  // The constant itself is computed, never assumed; it just has to exist and
  // be real. Both paper-level anchors are asserted inside the calibration.
  const double kappa = kappa_calibration();
  CHECK(std::isfinite(kappa));
  CHECK(kappa != 0.0);
}

TEST_CASE("d_Z on the potential-form metric is Killing with the expected invariant") {
  const auto inst = instantiate("desitter_u_form");
  const KillingField kz = axis(3);
  CHECK(killing_residual(inst.metric, kz, real_point(2.0, 0.3, 0.4, 0.5)) < 1e-10);

  const auto inv = l_invariants(inst.metric, kz, real_point(2.0, 0.3, 0.4, 0.5));
  CHECK(std::abs(inv.first - cplx(-0.5)) < 1e-8 * 0.5);  // -2 L^2 / (9 T^2) at T=2, L=3

  // Scaled coordinate vector fields stop being Killing.
  KillingField tkz{{C(0.0), C(0.0), C(0.0), Expr::coordinate(0)}};
  CHECK(killing_residual(inst.metric, tkz, real_point(2.0, 0.3, 0.4, 0.5)) > 1e-2);
  CHECK_THROWS_AS(l_invariants(inst.metric, tkz, real_point(2.0, 0.3, 0.4, 0.5)), NotKilling);
}

TEST_CASE("constant vectors on the flat metric") {
  const MetricField m = flat_euclid();
  for (int i = 0; i < 4; ++i)
    CHECK(killing_residual(m, axis(i), real_point(0.4, -0.2, 0.9, 0.1)) == 0.0);
}

TEST_CASE("flat rotation generator is nonnull away from the axis") {
  const MetricField m = flat_euclid();
  KillingField rot{{-Expr::coordinate(1), Expr::coordinate(0), C(0.0), C(0.0)}};
  std::vector<Point> pts = {real_point(1.0, 0.5, 0.2, 0.1), real_point(0.7, -0.8, 0.4, 0.9),
                            real_point(-1.1, 0.6, -0.5, 0.3)};
  const KillingReport rep = classify_killing(m, rot, pts);
  CHECK(rep.killing_residual < 1e-12);
  CHECK(rep.classification == KillingClass::nonnull);
}

TEST_CASE("null and nonnull Killing vectors of the W = 0 metric") {
  const auto inst = instantiate("desitter_w0");
  const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 20);

  const KillingReport rt = classify_killing(inst.metric, axis(2), pts);  // d_t
  CHECK(rt.classification == KillingClass::nonnull);

  const KillingReport re = classify_killing(inst.metric, axis(1), pts);  // d_eta
  CHECK(re.classification == KillingClass::null_vector);
  CHECK(std::abs(re.inv_plus) < 1e-10);
  CHECK(std::abs(re.inv_minus) < 1e-10);

  // d_t invariant: -2 (Lambda / (3 tau phi))^2 = -2 at phi = 1, tau = 1, L = 3.
  const auto inv = l_invariants(inst.metric, axis(2), real_point(1.0, 0.2, 0.3, 0.4));
  CHECK(std::abs(inv.first - cplx(-2.0)) < 1e-8 * 2.0);
}

TEST_CASE("all ten isometry generators of the W = 0 metric") {
  const auto inst = instantiate("desitter_w0");
  const auto& killing = inst.record.expected.killing;
  REQUIRE(killing.size() == 10);
  const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 50);
  for (const KillingEntry& k : killing) {
    double worst = 0.0;
    for (const Point& p : pts) worst = std::max(worst, killing_residual(inst.metric, k.field, p));
    INFO(k.name);
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("nabla K is antisymmetric for catalog Killing fields") {
  for (const char* id : {"desitter_w0", "desitter_u_form", "sigma_family_1"}) {
    const auto inst = instantiate(id);
    const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 10);
    for (const KillingEntry& k : inst.record.expected.killing) {
      for (const Point& p : pts) {
        // The residual is exactly the symmetric part of nabla K.
        CHECK(killing_residual(inst.metric, k.field, p) < 1e-10);
      }
    }
  }
}

TEST_CASE("invariant criterion holds on every classified catalog pair") {
  for (const std::string& id : catalog()) {
    const auto inst = instantiate(id);
    const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 15);
    for (const KillingEntry& k : inst.record.expected.killing) {
      if (!k.expected_class) continue;
      INFO(id << ":" << k.name);
      // classify_killing throws TheoremViolation on any mixed signal.
      const KillingReport rep = classify_killing(inst.metric, k.field, pts);
      CHECK(rep.classification == *k.expected_class);
      if (rep.classification == KillingClass::null_vector) {
        CHECK(std::abs(rep.k_norm) < 1e-8);
        CHECK(std::abs(rep.inv_plus) < 1e-8);
        CHECK(std::abs(rep.inv_minus) < 1e-8);
      } else {
        CHECK(std::abs(rep.k_norm) > 1e-8);
        CHECK(std::abs(rep.inv_plus) > 1e-8);
        CHECK(std::abs(rep.inv_minus) > 1e-8);
      }
    }
  }
}

TEST_CASE("invariant formulas from the two charts agree under one kappa") {
  // U-chart anchor: -2 Lambda^2/(9 T^2); W-chart anchor: -2 (Lambda/(3 tau phi))^2.
  const auto uf = instantiate("desitter_u_form");
  const auto w0 = instantiate("desitter_w0");
  for (double c : {0.8, 1.3, 1.9}) {
    const auto iu = l_invariants(uf.metric, axis(3), real_point(c, 0.1, 0.2, 0.3));
    const cplx want_u = -2.0 * 9.0 / (9.0 * c * c);
    CHECK(std::abs(iu.first - want_u) < 1e-8 * std::abs(want_u));

    const auto iw = l_invariants(w0.metric, axis(2), real_point(c, 0.2, 0.3, 0.4));
    const cplx want_w = -2.0 * std::pow(3.0 / (3.0 * c), 2.0);
    CHECK(std::abs(iw.first - want_w) < 1e-8 * std::abs(want_w));
  }
}
