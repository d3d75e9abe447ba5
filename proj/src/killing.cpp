#include "hh/killing.hpp"

#include <cmath>

#include "hh/errors.hpp"
#include "hh/formalisms.hpp"

namespace hh {

namespace {

struct NablaK {
  CMat4 nabla;     // nabla_a K_b
  CMat4 F;         // antisymmetric part
  cplx k_norm;     // K_a K^a
  double k_sup;    // max |K^a|
  MetricPoint mp;
};

NablaK nabla_k(const MetricField& m, const KillingField& K, const Point& p) {
  NablaK out;
  out.mp = metric_at(m, p);
  const auto gamma = christoffel_from(out.mp);

  std::array<Jet2, 4> kj;
  for (int c = 0; c < 4; ++c) kj[static_cast<size_t>(c)] = eval_jet(K.components[static_cast<size_t>(c)], m.chart, p, m.params);

  std::array<cplx, 4> k_up, k_low;
  out.k_sup = 0.0;
  for (int c = 0; c < 4; ++c) {
    k_up[static_cast<size_t>(c)] = kj[static_cast<size_t>(c)].v;
    out.k_sup = std::max(out.k_sup, std::abs(kj[static_cast<size_t>(c)].v));
  }
  for (int b = 0; b < 4; ++b) {
    cplx s(0.0);
    for (int c = 0; c < 4; ++c) s += out.mp.g[static_cast<size_t>(b * 4 + c)] * k_up[static_cast<size_t>(c)];
    k_low[static_cast<size_t>(b)] = s;
  }
  out.k_norm = cplx(0.0);
  for (int a = 0; a < 4; ++a) out.k_norm += k_low[static_cast<size_t>(a)] * k_up[static_cast<size_t>(a)];

  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      // d_a K_b with K_b = g_bc K^c
      cplx dKb(0.0);
      for (int c = 0; c < 4; ++c)
        dKb += out.mp.d(a, b, c) * k_up[static_cast<size_t>(c)] +
               out.mp.g[static_cast<size_t>(b * 4 + c)] * kj[static_cast<size_t>(c)].d[static_cast<size_t>(a)];
      cplx conn(0.0);
      for (int c = 0; c < 4; ++c)
        conn += gamma[static_cast<size_t>(c * 16 + a * 4 + b)] * k_low[static_cast<size_t>(c)];
      out.nabla[static_cast<size_t>(a * 4 + b)] = dKb - conn;
    }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      out.F[static_cast<size_t>(a * 4 + b)] =
          0.5 * (out.nabla[static_cast<size_t>(a * 4 + b)] - out.nabla[static_cast<size_t>(b * 4 + a)]);
  return out;
}

double residual_from(const NablaK& nk) {
  double r = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      r = std::max(r, std::abs(nk.nabla[static_cast<size_t>(a * 4 + b)] +
                               nk.nabla[static_cast<size_t>(b * 4 + a)]));
  return r / (nk.mp.scale * std::max(1.0, nk.k_sup));
}

cplx two_form_square(const CMat4& F, const MetricPoint& mp) {
  cplx s(0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      cplx Fup(0.0);
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
          Fup += mp.ginv[static_cast<size_t>(a * 4 + m)] * mp.ginv[static_cast<size_t>(b * 4 + n)] *
                 F[static_cast<size_t>(m * 4 + n)];
      s += F[static_cast<size_t>(a * 4 + b)] * Fup;
    }
  return s;
}

// Squares of the SD/ASD halves of F.
std::pair<cplx, cplx> half_squares(const NablaK& nk, int orientation) {
  const CMat4 star = hodge_star_2form(nk.F, nk.mp, orientation);
  const bool sd_plus = duality_convention().sd_is_plus;
  CMat4 f_sd, f_asd;
  for (size_t k = 0; k < 16; ++k) {
    const cplx plus = 0.5 * (nk.F[k] + star[k]);
    const cplx minus = 0.5 * (nk.F[k] - star[k]);
    f_sd[k] = sd_plus ? plus : minus;
    f_asd[k] = sd_plus ? minus : plus;
  }
  return {two_form_square(f_sd, nk.mp), two_form_square(f_asd, nk.mp)};
}

double calibrate_kappa() {
  // First anchor: trivial potential in the (T,X,Y,Z) form, K = d/dZ, where
  // the undotted invariant is -2 Lambda^2 / (9 T^2).
  const cplx lambda(3.0);
  const UData u0 = make_u_data(Expr::constant(0.0),
                               {Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0),
                                Expr::constant(0.0)},
                               lambda);
  const MetricField mu = build_u_metric(u0);
  const KillingField kz{{Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0),
                         Expr::constant(1.0)}};
  const Point pu = real_point(2.0, 0.3, 0.4, 0.5);
  const NablaK nk = nabla_k(mu, kz, pu);
  const auto sq = half_squares(nk, mu.orientation);
  const cplx target_u = -2.0 * lambda * lambda / (9.0 * pu[0] * pu[0]);
  if (std::abs(sq.first) < 1e-14)
    throw CalibrationError("vanishing duality-half square on the reference metric");
  const cplx kappa_c = target_u / sq.first;
  if (std::abs(kappa_c.imag()) > 1e-10 * std::abs(kappa_c))
    throw CalibrationError("calibration constant has an imaginary part");
  const double kappa = kappa_c.real();

  // Second anchor: the key-function form with W = 0, K = d/dt, invariant
  // -2 (Lambda / (3 tau phi))^2. One constant must satisfy both.
  WData w0;
  w0.W = Expr::constant(0.0);
  w0.tau = 1.0;
  w0.lambda = 3.0;
  const MetricField mw = build_w_metric(w0);
  const KillingField kt{{Expr::constant(0.0), Expr::constant(0.0), Expr::constant(1.0),
                         Expr::constant(0.0)}};
  const Point pw = real_point(1.0, 0.2, 0.3, 0.4);
  const NablaK nkw = nabla_k(mw, kt, pw);
  const auto sqw = half_squares(nkw, mw.orientation);
  const cplx target_w = -2.0 * std::pow(w0.lambda / (3.0 * w0.tau * pw[0]), 2.0);
  if (std::abs(kappa * sqw.first - target_w) > 1e-8 * std::abs(target_w))
    throw CalibrationError("second anchor disagrees: kappa*F_sd^2 = " +
                           std::to_string((kappa * sqw.first).real()) + " vs " +
                           std::to_string(target_w.real()));
  return kappa;
}

}  // namespace

const char* killing_class_name(KillingClass c) {
  switch (c) {
    case KillingClass::null_vector: return "null";
    case KillingClass::nonnull: return "nonnull";
    case KillingClass::not_killing: return "not_killing";
  }
  return "?";
}

double kappa_calibration() {
  static const double kappa = calibrate_kappa();
  return kappa;
}

double killing_residual(const MetricField& m, const KillingField& K, const Point& p) {
  return residual_from(nabla_k(m, K, p));
}

std::pair<cplx, cplx> l_invariants(const MetricField& m, const KillingField& K, const Point& p) {
  const NablaK nk = nabla_k(m, K, p);
  const double res = residual_from(nk);
  if (res >= 1e-8)
    throw NotKilling("killing residual " + std::to_string(res) + " at the requested point");
  const double kappa = kappa_calibration();
  const auto sq = half_squares(nk, m.orientation);
  return {kappa * sq.first, kappa * sq.second};
}

KillingReport classify_killing(const MetricField& m, const KillingField& K,
                               const std::vector<Point>& points) {
  if (points.empty()) throw Error("classify_killing needs at least one point");
  KillingReport rep;
  rep.kappa = kappa_calibration();

  constexpr double kTol = 1e-8;
  bool first = true;
  bool any_not_killing = false;
  int null_votes = 0, nonnull_votes = 0;
  for (const Point& p : points) {
    const NablaK nk = nabla_k(m, K, p);
    const double res = residual_from(nk);
    rep.killing_residual = std::max(rep.killing_residual, res);
    if (res >= kTol) {
      any_not_killing = true;
      continue;
    }
    const auto sq = half_squares(nk, m.orientation);
    const cplx ip = rep.kappa * sq.first;
    const cplx im = rep.kappa * sq.second;
    if (first) {
      rep.k_norm = nk.k_norm;
      rep.inv_plus = ip;
      rep.inv_minus = im;
      first = false;
    }
    const double norm_scale = nk.mp.scale * std::max(1.0, nk.k_sup * nk.k_sup);
    const bool k_null = std::abs(nk.k_norm) / norm_scale < kTol;
    const bool inv_zero = std::abs(ip) / norm_scale < kTol && std::abs(im) / norm_scale < kTol;
    const bool inv_both = std::abs(ip) / norm_scale >= kTol && std::abs(im) / norm_scale >= kTol;
    if (k_null && inv_zero)
      ++null_votes;
    else if (!k_null && inv_both)
      ++nonnull_votes;
    else
      throw TheoremViolation("mixed null/invariant signals: |K.K| = " +
                             std::to_string(std::abs(nk.k_norm)) + ", |inv| = (" +
                             std::to_string(std::abs(ip)) + ", " + std::to_string(std::abs(im)) +
                             ")");
  }
  if (any_not_killing) {
    rep.classification = KillingClass::not_killing;
    return rep;
  }
  if (null_votes > 0 && nonnull_votes > 0)
    throw TheoremViolation("classification flips across the sample");
  rep.classification = null_votes > 0 ? KillingClass::null_vector : KillingClass::nonnull;
  return rep;
}

}  // namespace hh
