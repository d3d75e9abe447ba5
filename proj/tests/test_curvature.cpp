#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hh/curvature.hpp"
#include "hh/sampling.hpp"
#include "hh/solutions.hpp"
#include "support/fd_oracle.hpp"

using namespace hh;

namespace {

MetricField flat_euclid() {
  MetricField m;
  m.chart = Chart{{"x0", "x1", "x2", "x3"}, FieldTag::real, {}};
  for (auto& g : m.g) g = Expr::constant(0.0);
  for (int i = 0; i < 4; ++i) m.g[sym_index(i, i)] = Expr::constant(1.0);
  return m;
}

double tensor_rel_diff(const std::array<cplx, 256>& a, const std::array<cplx, 256>& b) {
  double scale = 0.0;
  for (const cplx& v : b) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1.0);
  double worst = 0.0;
  for (size_t k = 0; k < 256; ++k) worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
  return worst;
}

}  // namespace

TEST_CASE("flat metric curvature vanishes") {
  const CurvatureBundle b = curvature_bundle(flat_euclid(), real_point(0.1, 0.2, 0.3, 0.4));
  for (const cplx& v : b.gamma) CHECK(v == cplx(0.0));
  for (const cplx& v : b.riemann) CHECK(v == cplx(0.0));
  CHECK(b.scalar == cplx(0.0));
  CHECK(b.einstein_residual == 0.0);
  CHECK(b.weyl_norm == 0.0);
  CHECK(b.sd_weyl_norm == 0.0);
  CHECK(b.asd_weyl_norm == 0.0);
}

TEST_CASE("constant rescaling leaves the connection unchanged") {
  const auto inst = instantiate("desitter_simple_v");
  MetricField scaled = inst.metric;
  for (auto& g : scaled.g) g = Expr::constant(4.0) * g;
  const Point p = real_point(0.7, 0.9, 2.4, 0.5);
  const auto g1 = christoffel(inst.metric, p);
  const auto g2 = christoffel(scaled, p);
  for (size_t k = 0; k < 64; ++k) CHECK(std::abs(g1[k] - g2[k]) < 1e-13);
}

TEST_CASE("connection and curvature match the finite-difference oracle") {
  int families = 0;
  for (const char* id : {"desitter_conformal", "desitter_w0", "sigma_family_1"}) {
    const auto inst = instantiate(id);
    const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 5);
    for (const Point& p : pts) {
      const MetricPoint mp = metric_at(inst.metric, p);
      const CurvatureBundle b = curvature_from_derivatives(mp, inst.metric.orientation);
      const auto fd = oracle::fd_curvature(inst.metric, p, 1e-4);

      double gscale = 1.0;
      for (const cplx& v : fd.gamma) gscale = std::max(gscale, std::abs(v));
      for (size_t k = 0; k < 64; ++k)
        CHECK(std::abs(b.gamma[k] - fd.gamma[k]) <= 1e-6 * gscale);

      CHECK(tensor_rel_diff(b.riemann, fd.riemann) <= 1e-6);
      CHECK(std::abs(b.scalar - fd.scalar) <= 1e-6 * std::max(1.0, std::abs(fd.scalar)));
    }
    ++families;
  }
  CHECK(families == 3);
}

TEST_CASE("metric compatibility of the connection") {
  const auto inst = instantiate("sigma_family_2");
  const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 10);
  for (const Point& p : pts) {
    const MetricPoint mp = metric_at(inst.metric, p);
    const auto gamma = christoffel_from(mp);
    double worst = 0.0;
    for (int c = 0; c < 4; ++c)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          cplx s = mp.d(c, a, b);
          for (int e = 0; e < 4; ++e)
            s -= gamma[e * 16 + c * 4 + a] * mp.g[e * 4 + b] +
                 gamma[e * 16 + c * 4 + b] * mp.g[a * 4 + e];
          worst = std::max(worst, std::abs(s));
        }
    CHECK(worst <= 1e-10 * mp.scale);
  }
}

TEST_CASE("de Sitter bundle: R = -4 Lambda, Weyl zero") {
  const auto inst = instantiate("desitter_w0");
  const CurvatureBundle b = curvature_bundle(inst.metric, real_point(1.2, 0.4, -0.3, 0.6));
  CHECK(std::abs(b.scalar - cplx(-12.0)) < 1e-9);
  CHECK(b.weyl_norm < 1e-12);
  CHECK(b.einstein_residual < 1e-9);
}

TEST_CASE("reference ASD family: one Weyl half vanishes, the other does not") {
  const auto inst = instantiate("sigma_family_1");
  const CurvatureBundle b = curvature_bundle(inst.metric, real_point(1.1, 0.7, 0.3, 0.2));
  CHECK(b.sd_weyl_norm < 1e-8);
  CHECK(b.asd_weyl_norm > 1e-3);
}

TEST_CASE("riemann symmetries, bianchi, trace-free weyl, idempotent split") {
  for (const char* id : {"sigma_family_1", "sigma_family_2", "desitter_u_form"}) {
    const auto inst = instantiate(id);
    const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 6);
    for (const Point& p : pts) {
      const MetricPoint mp = metric_at(inst.metric, p);
      const CurvatureBundle b = curvature_from_derivatives(mp, inst.metric.orientation);
      double rscale = 1e-30;
      for (const cplx& v : b.riemann_low) rscale = std::max(rscale, std::abs(v));

      for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
          for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d) {
              const cplx R = b.Rlow(a, bb, c, d);
              CHECK(std::abs(R + b.Rlow(bb, a, c, d)) <= 1e-10 * rscale);
              CHECK(std::abs(R + b.Rlow(a, bb, d, c)) <= 1e-10 * rscale);
              CHECK(std::abs(R - b.Rlow(c, d, a, bb)) <= 1e-10 * rscale);
              const cplx bianchi = R + b.Rlow(a, c, d, bb) + b.Rlow(a, d, bb, c);
              CHECK(std::abs(bianchi) <= 1e-10 * rscale);
            }

      // g^{ac} C_abcd = 0
      for (int bb = 0; bb < 4; ++bb)
        for (int d = 0; d < 4; ++d) {
          cplx tr(0.0);
          for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c) tr += mp.ginv[a * 4 + c] * b.C(a, bb, c, d);
          CHECK(std::abs(tr) <= 1e-10 * std::max(rscale, 1.0));
        }

      // Re-applying the dual to the ASD half reproduces it up to sign.
      if (b.weyl_norm > 1e-6) {
        const bool sd_plus = duality_convention().sd_is_plus;
        const double half_sign = sd_plus ? -1.0 : +1.0;  // eigenvalue of the ASD half
        double worst = 0.0;
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            CMat4 F{};
            for (int a = 0; a < 4; ++a)
              for (int bb = 0; bb < 4; ++bb)
                F[a * 4 + bb] = b.weyl_asd[((a * 4 + bb) * 4 + c) * 4 + d];
            const CMat4 star = hodge_star_2form(F, mp, inst.metric.orientation);
            for (size_t k = 0; k < 16; ++k)
              worst = std::max(worst, std::abs(star[k] - half_sign * F[k]));
          }
        CHECK(worst <= 1e-10 * std::max(rscale, 1.0));
      }
    }
  }
}

TEST_CASE("conformal weight of the covariant Weyl tensor") {
  const auto inst = instantiate("sigma_family_1");
  const Expr phi = Expr::coordinate(0), xi = Expr::coordinate(1);
  const Expr omega2 = exp(Expr::constant(0.2) * phi + Expr::constant(0.1) * xi * xi);
  MetricField scaled = inst.metric;
  for (auto& g : scaled.g) g = omega2 * g;

  const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 5);
  for (const Point& p : pts) {
    const CurvatureBundle b1 = curvature_bundle(inst.metric, p);
    const CurvatureBundle b2 = curvature_bundle(scaled, p);
    const cplx w = eval_value(omega2, p, inst.metric.params);
    double scale = 1.0;
    for (const cplx& v : b2.weyl) scale = std::max(scale, std::abs(v));
    for (size_t k = 0; k < 256; ++k)
      CHECK(std::abs(b2.weyl[k] - w * b1.weyl[k]) <= 1e-8 * scale);
  }
}

TEST_CASE("branch-ambiguous volume density is refused") {
  const auto inst = instantiate("sigma_family_1");
  MetricField rotated = inst.metric;
  // (1+i)^4 = -4: a real negative determinant multiple, squarely on the cut.
  for (auto& g : rotated.g) g = Expr::constant(cplx(1.0, 1.0)) * g;
  CHECK_THROWS_AS(curvature_bundle(rotated, real_point(1.1, 0.7, 0.3, 0.2)), BranchAmbiguity);

  // Conformally flat metrics never need the star, even with det < 0.
  MetricField lorentz;
  lorentz.chart = Chart{{"x0", "x1", "x2", "x3"}, FieldTag::real, {}};
  for (auto& g : lorentz.g) g = Expr::constant(0.0);
  for (int i = 0; i < 3; ++i) lorentz.g[sym_index(i, i)] = Expr::constant(1.0);
  lorentz.g[sym_index(3, 3)] = Expr::constant(-1.0);
  const CurvatureBundle b = curvature_bundle(lorentz, real_point(0, 0, 0, 0));
  CHECK(b.sd_weyl_norm == 0.0);
  CHECK(b.asd_weyl_norm == 0.0);
}

TEST_CASE("certificates over catalog de Sitter entries") {
  for (const char* id : {"desitter_w0", "desitter_conformal", "desitter_simple_v",
                                "desitter_u_form"}) {
    const auto inst = instantiate(id);
    const auto pts =
        sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 100);
    const CertificateStats st = einstein_certificate(inst.metric, 3.0, pts);
    CHECK(st.points_evaluated == 100);
    CHECK(st.max_einstein_residual < 1e-9);
    CHECK(st.max_scalar_deviation < 1e-9);
    CHECK(st.max_weyl < 1e-9);
  }
}

TEST_CASE("certificate errors carry the offending point") {
  const auto inst = instantiate("desitter_simple_v");
  auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 3);
  pts.push_back(real_point(0.5, 0.5, 2.0, 1.0));  // conformal factor vanishes here
  try {
    einstein_certificate(inst.metric, 3.0, pts);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("at point") != std::string::npos);
    CHECK(msg.find("2.0") != std::string::npos);
  }
}

TEST_CASE("certificate is thread-invariant") {
  const auto inst = instantiate("sigma_family_1");
  const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 24);
  const CertificateStats a = einstein_certificate(inst.metric, 3.0, pts, 1);
  const CertificateStats b = einstein_certificate(inst.metric, 3.0, pts, 4);
  CHECK(a.max_einstein_residual == b.max_einstein_residual);
  CHECK(a.max_sd_weyl == b.max_sd_weyl);
  CHECK(a.max_asd_weyl == b.max_asd_weyl);
  for (int d = 0; d < 4; ++d) CHECK(a.worst_point[d] == b.worst_point[d]);
}

TEST_CASE("certificate: sigma family with finite-difference cross-check") {
  const auto inst = instantiate("sigma_family_1");
  const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 50);
  const CertificateStats st = einstein_certificate(inst.metric, 3.0, pts);
  CHECK(st.max_einstein_residual < 1e-8);
  CHECK(st.max_sd_weyl < 1e-8);
  for (size_t i = 0; i < 3; ++i) {
    const auto fd = oracle::fd_curvature(inst.metric, pts[i], 1e-4);
    const CurvatureBundle b = curvature_bundle(inst.metric, pts[i]);
    CHECK(std::abs(b.scalar - fd.scalar) < 1e-6 * std::abs(fd.scalar));
    double rscale = 1.0;
    for (const cplx& v : fd.ricci) rscale = std::max(rscale, std::abs(v));
    for (size_t k = 0; k < 16; ++k) CHECK(std::abs(b.ricci[k] - fd.ricci[k]) < 1e-6 * rscale);
  }
}
