#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hh/curvature.hpp"
#include "hh/formalisms.hpp"
#include "hh/killing.hpp"
#include "hh/sampling.hpp"
#include "hh/solutions.hpp"

using namespace hh;

namespace {

Expr C(double v) { return Expr::constant(v); }
Expr X(int i) { return Expr::coordinate(i); }

WData wdata(Expr W, cplx tau = 1.0, cplx lambda = 3.0) {
  WData w;
  w.W = std::move(W);
  w.tau = tau;
  w.lambda = lambda;
  return w;
}

SigmaData sdata(Expr S, cplx tau = 1.0, cplx lambda = 3.0) {
  SigmaData s;
  s.Sigma = std::move(S);
  s.tau = tau;
  s.lambda = lambda;
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// W formalism
// ---------------------------------------------------------------------------

TEST_CASE("heavenly residual") {
  const Point p = real_point(0.8, 0.4, 0.1, 0.7);
  CHECK(heavenly_residual(wdata(C(0.0)), p) == 0.0);

  const auto caseII = instantiate("caseII_key_function");
  CHECK(heavenly_residual(*caseII.w, p) < 1e-10);

  // Monomials in eta alone solve the equation identically; a mixed monomial
  // with phi curvature does not.
  const Expr eta = X(1);
  CHECK(heavenly_residual(wdata(eta * eta * eta), p) < 1e-15);
  const Expr phi = X(0);
  CHECK(heavenly_residual(wdata(phi * phi * eta * eta), p) > 1e-2);
}

TEST_CASE("W = 0 metric certifies as a constant-curvature background") {
  const auto w0 = instantiate("desitter_w0");
  const auto pts = sample_points(w0.metric.chart, w0.record.box, w0.metric.params, 30);
  const CertificateStats st = einstein_certificate(w0.metric, 3.0, pts);
  CHECK(st.max_einstein_residual < 1e-9);
  CHECK(st.max_weyl < 1e-9);
}

// ---------------------------------------------------------------------------
// Legendre step and the P equation
// ---------------------------------------------------------------------------

TEST_CASE("p residual basics") {
  PData p0;
  p0.P = C(0.0);
  CHECK(p_residual(p0, real_point(0.5, 0.3, 0.0, 0.8)) == 0.0);

  PData pz;
  pz.P = X(1) * X(1) * X(3);  // z^2 v
  CHECK(p_residual(pz, real_point(0.5, 0.3, 0.0, 0.8)) > 1e-3);
}

TEST_CASE("quadratic key function has the closed-form Legendre image") {
  // W = eta^2/2: z = eta, P = -z^2 (1 + phi)/4, a solution of the P equation.
  const WData w = wdata(C(0.5) * X(1) * X(1));
  const LegendreResult lr = legendre_to_p(w, 0.7, 0.9, 0.4);
  CHECK(lr.iterations <= 1);
  CHECK(lr.inversion_error < 1e-12);
  CHECK(std::abs(lr.eta - cplx(0.9)) < 1e-12);
  const cplx want = -0.9 * 0.9 * (1.0 + 0.7) / 4.0;
  CHECK(std::abs(lr.P - want) < 1e-12);

  // The transformed data satisfies the P equation:
  // P_pp P_zz - P_pz^2 + phi P_pp - P_p + P_zv = 0.
  const cplx lhs = lr.ddP[0] * lr.ddP[3] - lr.ddP[1] * lr.ddP[1] + cplx(0.7) * lr.ddP[0] -
                   lr.dP[0] + lr.ddP[4];
  CHECK(std::abs(lhs) < 1e-12);
}

TEST_CASE("Newton inversion identity for a non-solution key function") {
  // W = eta^2/2 + eta phi inverts cleanly even though it does not satisfy the
  // key-function equation; its P-equation residual is exactly phi/4.
  const WData w = wdata(C(0.5) * X(1) * X(1) + X(1) * X(0));
  for (double phi : {0.4, 0.9, 1.5}) {
    for (double z : {-0.8, 0.3, 1.1}) {
      const LegendreResult lr = legendre_to_p(w, phi, z, 0.6);
      CHECK(lr.inversion_error < 1e-12);
      CHECK(lr.iterations <= 10);
      CHECK(std::abs(lr.eta - (cplx(z) - cplx(phi))) < 1e-12);
      const cplx lhs = lr.ddP[0] * lr.ddP[3] - lr.ddP[1] * lr.ddP[1] + cplx(phi) * lr.ddP[0] -
                       lr.dP[0] + lr.ddP[4];
      CHECK(std::abs(lhs - cplx(phi / 4.0)) < 1e-12);
    }
  }
}

TEST_CASE("linear-in-eta key functions degenerate the Legendre step") {
  const WData w = wdata(C(2.0) * X(0) * X(1));  // linear in eta
  CHECK_THROWS_AS(legendre_to_p(w, 0.7, 0.9, 0.4), DegenerateLegendre);
}

TEST_CASE("legendre derivatives agree with independent differencing") {
  // d/dz P at fixed (phi, v) should match (P(z+h) - P(z-h)) / 2h.
  const WData w = wdata(C(0.5) * X(1) * X(1) + C(0.25) * X(1) * X(1) * X(0) + exp(X(3)) * X(1));
  const double h = 1e-6;
  const LegendreResult c0 = legendre_to_p(w, 0.8, 0.5, 0.3);
  const LegendreResult cp = legendre_to_p(w, 0.8, 0.5 + h, 0.3);
  const LegendreResult cm = legendre_to_p(w, 0.8, 0.5 - h, 0.3);
  CHECK(std::abs((cp.P - cm.P) / (2.0 * h) - c0.dP[1]) < 1e-8);
  CHECK(std::abs((cp.dP[1] - cm.dP[1]) / (2.0 * h) - c0.ddP[3]) < 1e-7);
  const LegendreResult pp = legendre_to_p(w, 0.8 + h, 0.5, 0.3);
  const LegendreResult pm = legendre_to_p(w, 0.8 - h, 0.5, 0.3);
  CHECK(std::abs((pp.P - pm.P) / (2.0 * h) - c0.dP[0]) < 1e-8);
  CHECK(std::abs((pp.dP[1] - pm.dP[1]) / (2.0 * h) - c0.ddP[1]) < 1e-7);
}

// ---------------------------------------------------------------------------
// Sigma formalism
// ---------------------------------------------------------------------------

TEST_CASE("crucial equation residuals") {
  const Point p = real_point(0.9, 0.7, 0.2, 0.4);

  const auto r1 = sigma_residual(sdata(X(0) * X(1)), p);
  CHECK(r1.residual == 0.0);
  CHECK(std::abs(r1.sigma_phixi - cplx(1.0)) < 1e-15);
  CHECK(std::abs(r1.omega_xi - cplx(0.9)) < 1e-15);

  const auto fam1 = instantiate("sigma_family_1");
  CHECK(sigma_residual(*fam1.sigma, p).residual < 1e-12);

  const auto fam2 = instantiate("sigma_family_2");
  CHECK(sigma_residual(*fam2.sigma, real_point(0.9, 0.7, 0.2, 0.4)).residual < 1e-10);

  CHECK(sigma_residual(sdata(X(0) * X(0) * X(1)), p).residual > 1e-3);
}

TEST_CASE("sigma metric: ASD Einstein with one Weyl half vanishing") {
  for (const char* id : {"sigma_xi_phi", "sigma_family_1", "sigma_family_2"}) {
    const auto inst = instantiate(id);
    const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 25);
    const CertificateStats st = einstein_certificate(inst.metric, 3.0, pts);
    INFO(id);
    CHECK(st.max_einstein_residual < 1e-8);
    CHECK(st.max_scalar_deviation < 1e-8);
    CHECK(st.max_sd_weyl < 1e-8);
    CHECK(st.max_asd_weyl > 1e-3);
  }
}

TEST_CASE("degenerate sigma data is rejected") {
  CHECK_THROWS_AS(build_sigma_metric(sdata(C(1.0))), DegenerateSigma);  // Sigma_xi = 0
  CHECK_THROWS_AS(sigma_to_u(sdata(X(0) * X(0))), DegenerateSigma);
  // a = const kills Sigma_phixi.
  CHECK_THROWS_AS(build_sigma_metric(sdata(C(-0.5) * X(0) * X(0) + exp(X(3)) * (X(0) + X(1)))),
                  DegenerateSigma);
}

TEST_CASE("sigma_to_u on Sigma = phi xi gives U = ln T with the expected alpha") {
  const SigmaToUResult conv = sigma_to_u(sdata(X(0) * X(1)));
  const Params params{{"Lambda", 3.0}, {"tau", 1.0}};
  const Point q = real_point(1.3, -0.6, 0.8, 0.4);

  CHECK(std::abs(eval_value(conv.u.U, q, params) - std::log(1.3)) < 1e-15);
  // V = -3/(2 Lambda) = -1/2
  CHECK(std::abs(eval_value(conv.u.V, q, params) - cplx(-0.5)) < 1e-15);
  // alpha = -V dT + (3/(4 Lambda)) (Y - X)(dX + dY)
  const cplx ax = eval_value(conv.u.alpha[1], q, params);
  const cplx want = 3.0 / (4.0 * 3.0) * (0.8 - (-0.6));
  CHECK(std::abs(ax - want) < 1e-15);
  CHECK(std::abs(eval_value(conv.u.alpha[0], q, params) - cplx(0.5)) < 1e-15);
  CHECK(std::abs(eval_value(conv.u.alpha[2], q, params) - want) < 1e-15);
  CHECK(conv.u.alpha[3].is_zero());

  CHECK(alpha_residual(conv.u, q).residual < 1e-15);
  CHECK(std::abs(eval_value(conv.constraint, q, params)) < 1e-15);
}

TEST_CASE("family loci ride along under the chart change") {
  // phi + g is singular for the logarithmic family; after the chart change
  // the same locus must read T - (X+Y)/2, not a raw coordinate mix.
  const auto inst = instantiate("sigma_family_2");
  const SigmaToUResult conv = sigma_to_u(*inst.sigma);
  const MetricField mu = build_u_metric(conv.u);
  const Params& params = mu.params;
  // On the singular surface X + Y = 2T the chart must reject the point.
  CHECK_FALSE(mu.chart.is_admissible(real_point(0.5, 0.4, 0.6, 0.3), params));
  CHECK(mu.chart.is_admissible(real_point(1.2, -0.8, 0.4, 0.3), params));
}

TEST_CASE("pipeline coherence for every catalog sigma family") {
  for (const char* id : {"sigma_xi_phi", "sigma_family_1", "sigma_family_2"}) {
    const auto inst = instantiate(id);
    const SigmaToUResult conv = sigma_to_u(*inst.sigma);
    const MetricField mu = build_u_metric(conv.u);
    const auto to_u = map_sigma_to_u(inst.sigma->tau);

    const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 20);
    INFO(id);
    std::vector<Point> upts;
    for (const Point& p : pts) {
      CHECK(sigma_residual(*inst.sigma, p).residual < 1e-10);
      Point q;
      for (int c = 0; c < 4; ++c) q[c] = eval_value(to_u[c], p, inst.metric.params);
      const auto ar = alpha_residual(conv.u, q);
      CHECK(ar.bfp < 1e-10);
      CHECK(ar.residual < 1e-10);
      CHECK(std::abs(eval_value(conv.constraint, q, mu.params)) < 1e-10);
      upts.push_back(q);
    }
    const CertificateStats st = einstein_certificate(mu, inst.sigma->lambda, upts);
    CHECK(st.max_einstein_residual < 1e-8);
    CHECK(st.max_sd_weyl < 1e-8);

    const double pb = pullback_compare(inst.metric, to_u, mu, pts);
    CHECK(pb < 1e-8);
  }
}

// ---------------------------------------------------------------------------
// U formalism
// ---------------------------------------------------------------------------

TEST_CASE("trivial potential reproduces the display metric") {
  const UData u = make_u_data(C(0.0), {C(0.0), C(0.0), C(0.0), C(0.0)}, 3.0);
  const MetricField m = build_u_metric(u);
  // ds^2 = T^-2 (-(3/L)(dX^2 - dY^2 + dT^2) + (L/3) dZ^2)
  const MetricPoint mp = metric_at(m, real_point(2.0, 0.3, 0.4, 0.5));
  const double T2 = 4.0;
  CHECK(std::abs(mp.g[0 * 4 + 0] - cplx(-1.0 / T2)) < 1e-15);
  CHECK(std::abs(mp.g[1 * 4 + 1] - cplx(-1.0 / T2)) < 1e-15);
  CHECK(std::abs(mp.g[2 * 4 + 2] - cplx(1.0 / T2)) < 1e-15);
  CHECK(std::abs(mp.g[3 * 4 + 3] - cplx(1.0 / T2)) < 1e-15);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) CHECK(std::abs(mp.g[a * 4 + b]) < 1e-15);

  const CurvatureBundle b = curvature_bundle(m, real_point(2.0, 0.3, 0.4, 0.5));
  CHECK(b.weyl_norm < 1e-12);
  CHECK(std::abs(b.scalar + 12.0) < 1e-10);
}

TEST_CASE("alpha residual detects a missing potential") {
  const SigmaToUResult conv = sigma_to_u(sdata(X(0) * X(1)));
  UData broken = conv.u;
  broken.alpha = {C(0.0), C(0.0), C(0.0), C(0.0)};
  // dX^dY component of the right side is exactly 1 for U = ln T.
  const auto ar = alpha_residual(broken, real_point(1.3, -0.6, 0.8, 0.4));
  CHECK(std::abs(ar.residual - 1.0) < 1e-12);
}

TEST_CASE("bfp residual variants") {
  const Chart uc = u_chart();
  const Params params{{"Lambda", 3.0}};
  const Point p = real_point(1.2, 0.3, 0.5, 0.0);

  for (auto v : {BfpVariant::complex_toda, BfpVariant::neutral_upper, BfpVariant::neutral_lower,
                 BfpVariant::euclidean})
    CHECK(bfp_residual(C(0.0), v, uc, p, params) == 0.0);

  const Expr xy2 = (X(1) + X(2)) * (X(1) + X(2));
  CHECK(bfp_residual(xy2, BfpVariant::complex_toda, uc, p, params) < 1e-13);

  const Expr harmonic = X(1) * X(1) - X(2) * X(2);
  CHECK(bfp_residual(harmonic, BfpVariant::euclidean, uc, p, params) < 1e-13);
  CHECK(bfp_residual(harmonic, BfpVariant::complex_toda, uc, p, params) > 1.0);

  const Expr mixed = X(1) * X(1) + C(2.0) * X(2) * X(2);  // x^2 + 2 y^2
  CHECK(std::abs(bfp_residual(mixed, BfpVariant::euclidean, uc, p, params) - 6.0) < 1e-13);
  CHECK(std::abs(bfp_residual(mixed, BfpVariant::neutral_lower, uc, p, params) - 2.0) < 1e-13);
  CHECK(std::abs(bfp_residual(mixed, BfpVariant::neutral_upper, uc, p, params) - 6.0) < 1e-13);
}

TEST_CASE("u_harmonic_complex and u_confflat_1 are conformally flat solutions") {
  for (const char* id : {"u_harmonic_complex", "u_confflat_1"}) {
    const auto inst = instantiate(id);
    const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 20);
    INFO(id);
    for (const Point& p : pts) {
      const auto ar = alpha_residual(*inst.u, p);
      CHECK(ar.bfp < 1e-10);
      CHECK(ar.residual < 1e-10);
    }
    const CertificateStats st = einstein_certificate(inst.metric, 3.0, pts);
    CHECK(st.max_einstein_residual < 1e-8);
    CHECK(st.max_weyl < 1e-8);
  }
}

TEST_CASE("second conformally flat constraint as a residual operator") {
  const Chart uc = u_chart();
  const Params params{{"Lambda", 3.0}};
  const Point p = real_point(1.2, 0.7, 0.3, 0.0);

  // U = f(T) + g(X+Y) has U_TX = U_TY, so the derivative side vanishes and
  // a = 0 satisfies the constraint identically.
  const Expr split = ln(X(0)) + (X(1) + X(2)) * (X(1) + X(2));
  CHECK(confflat_constraint_residual(split, 0.0, uc, p, params) < 1e-13);
  CHECK(confflat_constraint_residual(split, 0.5, uc, p, params) > 1.0);

  // U = T (X - Y): hand expansion gives
  // 6 a e^U - 4 / (T (T(X-Y) - 2)^3).
  const Expr shear = X(0) * (X(1) - X(2));
  const double T = 1.2, Xc = 0.7, Yc = 0.3;
  const double want = std::abs(6.0 * 0.5 * std::exp(T * (Xc - Yc)) -
                               4.0 / (T * std::pow(T * (Xc - Yc) - 2.0, 3.0)));
  CHECK(std::abs(confflat_constraint_residual(shear, 0.5, uc, p, params) - want) < 1e-13);

  // Degenerate denominator: t U_t = 2 on the nose.
  const Expr linear = C(2.0) * ln(X(0));
  CHECK_THROWS_AS(confflat_constraint_residual(linear, 0.5, uc, p, params), SingularPoint);
}

// ---------------------------------------------------------------------------
// Real slices
// ---------------------------------------------------------------------------

TEST_CASE("euclidean slice of the trivial potential") {
  const UData u = make_u_data(C(0.0), {C(0.0), C(0.0), C(0.0), C(0.0)}, -6.0);
  SliceSpec spec;
  spec.variant = SliceVariant::euclidean;
  const SliceResult sr = slice_transform(u, spec);

  const auto pts = sample_points(sr.metric.chart, spec.box, sr.metric.params, 20);
  const CertificateStats st = einstein_certificate(sr.metric, sr.einstein_lambda, pts);
  CHECK(st.max_einstein_residual < 1e-9);
  CHECK(st.max_scalar_deviation < 1e-9);

  for (const Point& p : pts) {
    const MetricPoint mp = metric_at(sr.metric, p);
    std::array<double, 16> gr{};
    for (size_t k = 0; k < 16; ++k) gr[k] = mp.g[k].real();
    CHECK(sym4_signature(gr, 1e-10 * mp.scale) == std::array<int, 2>{4, 0});
    CHECK(slice_v_residual(sr, p) < 1e-12);
    CHECK(slice_alpha_residual(sr, p) < 1e-12);
    CHECK(slice_bfp_residual(sr, p) < 1e-12);
  }

  // Euclidean-side invariant of d_z: 8 Lambda_s^2 / t^2 > 0.
  const KillingField kz{{C(0.0), C(0.0), C(0.0), C(1.0)}};
  for (const Point& p : pts) {
    const auto inv = l_invariants(sr.metric, kz, p);
    const double ls = sr.slice_lambda.real();
    const cplx want = 8.0 * ls * ls / (p[0] * p[0]);
    CHECK(std::abs(inv.first - want) < 1e-8 * std::abs(want));
    CHECK(inv.first.real() > 0.0);
  }
}

TEST_CASE("neutral slices of U = ln t carry signature (++--)") {
  const SigmaToUResult conv = sigma_to_u(sdata(X(0) * X(1)));
  for (auto variant : {SliceVariant::neutral_1}) {
    SliceSpec spec;
    spec.variant = variant;
    const SliceResult sr = slice_transform(conv.u, spec);
    const auto pts = sample_points(sr.metric.chart, spec.box, sr.metric.params, 20);
    const CertificateStats st = einstein_certificate(sr.metric, sr.einstein_lambda, pts);
    CHECK(st.max_einstein_residual < 1e-8);
    for (const Point& p : pts) {
      const MetricPoint mp = metric_at(sr.metric, p);
      std::array<double, 16> gr{};
      for (size_t k = 0; k < 16; ++k) gr[k] = mp.g[k].real();
      CHECK(sym4_signature(gr, 1e-10 * mp.scale) == std::array<int, 2>{2, 2});
      CHECK(slice_v_residual(sr, p) < 1e-12);
      CHECK(slice_alpha_residual(sr, p) < 1e-12);
      CHECK(slice_bfp_residual(sr, p) < 1e-12);
    }
  }
}

TEST_CASE("neutral_2 slice of a real upper-sign payload") {
  // U = ln t with alpha = x/(2 Lambda) dy solves the upper-sign equations.
  const Expr lt = ln(X(0));
  const Expr ax = C(0.0);
  const Expr ay = X(1) / (C(2.0) * Expr::parameter("Lambda"));
  UData u = make_u_data(lt, {C(0.0), ax, ay, C(0.0)}, 3.0);
  SliceSpec spec;
  spec.variant = SliceVariant::neutral_2;
  spec.payload_is_real = true;
  const SliceResult sr = slice_transform(u, spec);

  const auto pts = sample_points(sr.metric.chart, spec.box, sr.metric.params, 20);
  const CertificateStats st = einstein_certificate(sr.metric, sr.einstein_lambda, pts);
  CHECK(st.max_einstein_residual < 1e-8);
  for (const Point& p : pts) {
    const MetricPoint mp = metric_at(sr.metric, p);
    std::array<double, 16> gr{};
    for (size_t k = 0; k < 16; ++k) gr[k] = mp.g[k].real();
    CHECK(sym4_signature(gr, 1e-10 * mp.scale) == std::array<int, 2>{2, 2});
    CHECK(slice_alpha_residual(sr, p) < 1e-12);
    CHECK(slice_bfp_residual(sr, p) < 1e-12);
  }
}

TEST_CASE("complex leak is caught") {
  // U = ln T does not survive the T -> i t substitution of neutral_2.
  const SigmaToUResult conv = sigma_to_u(sdata(X(0) * X(1)));
  SliceSpec spec;
  spec.variant = SliceVariant::neutral_2;
  CHECK_THROWS_AS(slice_transform(conv.u, spec), ComplexLeak);
}

TEST_CASE("lorentzian slice exists only for the trivial potential") {
  const UData u0 = make_u_data(C(0.0), {C(0.0), C(0.0), C(0.0), C(0.0)}, 3.0);
  SliceSpec spec;
  spec.variant = SliceVariant::lorentzian;
  spec.box = Box{{{-1.0, 1.0}, {-1.0, 1.0}, {0.2, 0.8}, {1.2, 2.0}}};
  const SliceResult sr = slice_transform(u0, spec);

  const auto pts = sample_points(sr.metric.chart, spec.box, sr.metric.params, 15);
  const CertificateStats st = einstein_certificate(sr.metric, 3.0, pts);
  CHECK(st.max_einstein_residual < 1e-9);
  CHECK(st.max_weyl < 1e-9);
  for (const Point& p : pts) {
    const MetricPoint mp = metric_at(sr.metric, p);
    std::array<double, 16> gr{};
    for (size_t k = 0; k < 16; ++k) gr[k] = mp.g[k].real();
    CHECK(sym4_signature(gr, 1e-10 * mp.scale) == std::array<int, 2>{3, 1});
  }

  // The chain back to the potential-form chart reproduces the slice metric.
  std::array<Expr, 4> chain;
  const auto inner = map_lorentz_to_simple_v();
  const auto outer = map_simple_v_to_u_form(3.0, 1.0);
  for (int c = 0; c < 4; ++c) chain[c] = outer[c].substitute(inner);
  const MetricField mu = build_u_metric(u0);
  CHECK(pullback_compare(sr.metric, chain, mu, pts) < 1e-10);

  const UData u1 = make_u_data(ln(X(0)), {C(0.0), C(0.0), C(0.0), C(0.0)}, 3.0);
  CHECK_THROWS_AS(slice_transform(u1, spec), LorentzianObstruction);
}

// ---------------------------------------------------------------------------
// Pullbacks
// ---------------------------------------------------------------------------

TEST_CASE("identity pullback") {
  const auto inst = instantiate("desitter_simple_v");
  const std::array<Expr, 4> id_map = {X(0), X(1), X(2), X(3)};
  const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 10);
  CHECK(pullback_compare(inst.metric, id_map, inst.metric, pts) < 1e-15);
}

TEST_CASE("step-4 chart change relates the sigma and potential forms") {
  const auto inst = instantiate("sigma_xi_phi");
  const SigmaToUResult conv = sigma_to_u(*inst.sigma);
  const MetricField mu = build_u_metric(conv.u);
  const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params, 20);
  CHECK(pullback_compare(inst.metric, map_sigma_to_u(1.0), mu, pts) < 1e-10);
}

TEST_CASE("the W = 0 and trivial-potential metrics agree under the paper chart change") {
  const auto w0 = instantiate("desitter_w0");
  const auto uf = instantiate("desitter_u_form");
  const auto pts = sample_points(w0.metric.chart, w0.record.box, w0.metric.params, 20);
  CHECK(pullback_compare(w0.metric, map_w0_to_u_form(3.0, 1.0), uf.metric, pts) < 1e-10);
}
