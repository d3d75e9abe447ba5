#include "hh/formalisms.hpp"

#include <cmath>

#include "hh/errors.hpp"
#include "hh/sampling.hpp"

namespace hh {

namespace {

const cplx kI(0.0, 1.0);

Expr C(double v) { return Expr::constant(v); }
Expr X(int i) { return Expr::coordinate(i); }
Expr lambda_param() { return Expr::parameter("Lambda"); }
Expr tau_param() { return Expr::parameter("tau"); }

Chart make_chart(std::array<std::string, 4> names, FieldTag tag, std::vector<Expr> loci,
                 std::vector<Expr> extra) {
  Chart c;
  c.names = std::move(names);
  c.field_tag = tag;
  c.singular_loci = std::move(loci);
  for (auto& e : extra) c.singular_loci.push_back(std::move(e));
  return c;
}

// Branch-sensitive subexpressions of the components become chart loci so the
// sampler keeps its distance from them.
void absorb_branch_loci(Chart& chart, const std::array<Expr, 10>& comps) {
  std::vector<Expr> found;
  for (const Expr& e : comps) collect_branch_loci(e, found);
  for (auto& e : found) {
    if (e.is_constant()) continue;
    chart.singular_loci.push_back(std::move(e));
  }
}

Jet2 jet_at(const Expr& e, const Point& p, const Params& params) {
  std::array<Jet2, 4> x;
  for (int i = 0; i < 4; ++i) x[static_cast<size_t>(i)] = Jet2::seed(p[static_cast<size_t>(i)], i);
  return e.eval<Jet2>(x, params);
}

}  // namespace

Chart w_chart(std::vector<Expr> extra_loci) {
  return make_chart({"phi", "eta", "t", "w"}, FieldTag::complex, {X(0)}, std::move(extra_loci));
}

Chart p_chart(std::vector<Expr> extra_loci) {
  return make_chart({"phi", "z", "rho", "v"}, FieldTag::complex, {X(0)}, std::move(extra_loci));
}

Chart sigma_chart(std::vector<Expr> extra_loci) {
  return make_chart({"phi", "xi", "rho", "v"}, FieldTag::complex, {X(0)}, std::move(extra_loci));
}

Chart u_chart(std::vector<Expr> extra_loci) {
  return make_chart({"T", "X", "Y", "Z"}, FieldTag::complex, {X(0)}, std::move(extra_loci));
}

Chart slice_chart(std::vector<Expr> extra_loci) {
  return make_chart({"t", "x", "y", "z"}, FieldTag::real, {X(0)}, std::move(extra_loci));
}

Chart lorentz_chart(std::vector<Expr> extra_loci) {
  return make_chart({"x", "y", "z", "t"}, FieldTag::real, {}, std::move(extra_loci));
}

Chart null_conformal_chart(std::vector<Expr> extra_loci) {
  return make_chart({"xi", "zeta", "u", "v"}, FieldTag::complex, {}, std::move(extra_loci));
}

// ---------------------------------------------------------------------------
// W formalism
// ---------------------------------------------------------------------------

double heavenly_residual(const WData& w, const Point& p) {
  Params params{{"Lambda", w.lambda}, {"tau", w.tau}};
  const Jet2 j = jet_at(w.W, p, params);
  const cplx phi = p[0];
  const cplx W_p = j.d[0], W_e = j.d[1];
  const cplx W_pp = j.h[sym_index(0, 0)], W_ee = j.h[sym_index(1, 1)];
  const cplx W_ep = j.h[sym_index(0, 1)], W_we = j.h[sym_index(1, 3)];
  const cplx lhs = phi * (W_ee * W_pp - W_ep * W_ep) + 2.0 * (W_e * W_ep - W_p * W_ee) +
                   W_we / w.tau - w.lambda / (6.0 * w.tau * w.tau) * W_pp;
  return std::abs(lhs);
}

MetricField build_w_metric(const WData& w) {
  const Expr phi = X(0);
  const Expr Wp = w.W.diff(0);
  const Expr We = w.W.diff(1);
  const Expr Wee = We.diff(1);
  const Expr Wep = We.diff(0);
  const Expr Wpp = Wp.diff(0);
  const Expr L = lambda_param();
  const Expr tau = tau_param();
  const Expr pref = pow(phi, -2.0);

  MetricField m;
  m.params = {{"Lambda", w.lambda}, {"tau", w.tau}};
  std::array<Expr, 10> g;
  for (auto& e : g) e = C(0.0);
  g[sym_index(1, 3)] = pref / tau;                                            // d(eta) d(w)
  g[sym_index(0, 2)] = -pref / tau;                                           // d(phi) d(t)
  g[sym_index(2, 2)] = pref * 2.0 * (C(0.0) - phi * Wee + L / (C(6.0) * tau * tau));
  g[sym_index(2, 3)] = pref * 2.0 * (We - phi * Wep);                         // dw dt
  g[sym_index(3, 3)] = pref * 2.0 * (C(2.0) * Wp - phi * Wpp);
  m.g = g;
  m.chart = w_chart(w.extra_loci);
  absorb_branch_loci(m.chart, m.g);
  return m;
}

// ---------------------------------------------------------------------------
// P formalism and the Legendre step
// ---------------------------------------------------------------------------

double p_residual(const PData& p, const Point& pt) {
  Params params{{"Lambda", p.lambda}, {"tau", p.tau}};
  const Jet2 j = jet_at(p.P, pt, params);
  const cplx phi = pt[0];
  const cplx P_p = j.d[0];
  const cplx P_pp = j.h[sym_index(0, 0)], P_zz = j.h[sym_index(1, 1)];
  const cplx P_zp = j.h[sym_index(0, 1)], P_zv = j.h[sym_index(1, 3)];
  return std::abs(P_pp * P_zz - P_zp * P_zp + phi * P_pp - P_p + P_zv);
}

LegendreResult legendre_to_p(const WData& w, cplx phi, cplx z, cplx v, cplx eta_seed) {
  Params params{{"Lambda", w.lambda}, {"tau", w.tau}};
  cplx eta = eta_seed;
  LegendreResult out;

  Jet2 j;
  for (int it = 0;; ++it) {
    j = jet_at(w.W, Point{phi, eta, cplx(0.0), v}, params);
    const cplx W_e = j.d[1];
    const cplx W_ee = j.h[sym_index(1, 1)];
    out.inversion_error = std::abs(W_e - z);
    out.iterations = it;
    if (std::abs(W_ee) < 1e-10)
      throw DegenerateLegendre("|W_etaeta| < 1e-10 at eta = " + std::to_string(eta.real()));
    if (out.inversion_error < 1e-12) break;
    if (it >= 50) throw NoConvergence("Legendre inversion stalled", out.inversion_error);
    eta -= (W_e - z) / W_ee;
  }

  out.eta = eta;
  const cplx W = j.v;
  const cplx W_p = j.d[0], W_v = j.d[3];
  const cplx W_pp = j.h[sym_index(0, 0)], W_ee = j.h[sym_index(1, 1)];
  const cplx W_ep = j.h[sym_index(0, 1)], W_ev = j.h[sym_index(1, 3)];
  const cplx W_pv = j.h[sym_index(0, 3)], W_vv = j.h[sym_index(3, 3)];

  out.P = 0.5 * (W - z * eta - 0.5 * phi * z * z);
  out.dP = {0.5 * (W_p - 0.5 * z * z), -0.5 * (eta + phi * z), 0.5 * W_v};
  // Second derivatives via the inverse-function dictionary.
  out.ddP[0] = 0.5 * (W_pp - W_ep * W_ep / W_ee);        // P_pp
  out.ddP[1] = 0.5 * (W_ep / W_ee - z);                  // P_pz
  out.ddP[2] = 0.5 * (W_pv - W_ep * W_ev / W_ee);        // P_pv
  out.ddP[3] = -0.5 / W_ee - 0.5 * phi;                  // P_zz
  out.ddP[4] = 0.5 * W_ev / W_ee;                        // P_zv
  out.ddP[5] = 0.5 * (W_vv - W_ev * W_ev / W_ee);        // P_vv
  return out;
}

// ---------------------------------------------------------------------------
// Sigma formalism
// ---------------------------------------------------------------------------

SigmaResidualReport sigma_residual(const SigmaData& s, const Point& p) {
  Params params{{"Lambda", s.lambda}, {"tau", s.tau}};
  const Jet2 j = jet_at(s.Sigma, p, params);
  const cplx S_xi = j.d[1];
  const cplx S_xiv = j.h[sym_index(1, 3)];
  const cplx S_pp = j.h[sym_index(0, 0)];
  const cplx S_pxi = j.h[sym_index(0, 1)];

  SigmaResidualReport r;
  r.residual = std::abs(S_xiv + S_xi * S_pp);
  r.sigma_phixi = S_pxi;
  // Omega_xi = 2 Sigma_xi - phi Sigma_phixi
  r.omega_xi = 2.0 * S_xi - p[0] * S_pxi;
  return r;
}

MetricField build_sigma_metric(const SigmaData& s) {
  const Expr phi = X(0);
  const Expr Sp = s.Sigma.diff(0);
  const Expr Sxi = s.Sigma.diff(1);
  const Expr Spxi = Sp.diff(1);
  const Expr Spp = Sp.diff(0);
  if (Spxi.is_zero()) throw DegenerateSigma("Sigma_phixi vanishes identically");
  const Expr omega_p = Sp - phi * Spp;     // Omega = 2 Sigma - phi Sigma_phi
  const Expr omega_xi = C(2.0) * Sxi - phi * Spxi;
  if (omega_xi.is_zero()) throw DegenerateSigma("Omega_xi vanishes identically");
  if (Sxi.is_zero()) throw DegenerateSigma("Sigma_xi vanishes identically");

  const Expr L = lambda_param();
  const Expr tau = tau_param();
  const Expr pref = pow(phi, -2.0);

  MetricField m;
  m.params = {{"Lambda", s.lambda}, {"tau", s.tau}};
  std::array<Expr, 10> g;
  for (auto& e : g) e = C(0.0);
  g[sym_index(0, 2)] = -pref / tau;                                            // d(phi) d(rho)
  g[sym_index(2, 2)] = pref * (C(2.0) * L / (C(3.0) * tau * tau)) * Sxi / omega_xi;
  g[sym_index(2, 3)] = pref * (C(2.0) / tau) * Sxi * omega_p / omega_xi;       // dv drho
  g[sym_index(3, 3)] = pref * (C(6.0) / L) * Sxi * omega_p * omega_p / omega_xi;
  g[sym_index(0, 3)] = -pref * (C(3.0) / L) * omega_p;                         // dphi dv
  g[sym_index(1, 3)] = -pref * (C(3.0) / L) * omega_xi;                        // dxi dv
  m.g = g;

  std::vector<Expr> extra = s.extra_loci;
  extra.push_back(Spxi);
  extra.push_back(omega_xi);
  m.chart = sigma_chart(std::move(extra));
  absorb_branch_loci(m.chart, m.g);
  return m;
}

SigmaToUResult sigma_to_u(const SigmaData& s) {
  const Expr Sxi = s.Sigma.diff(1);
  if (Sxi.is_zero()) throw DegenerateSigma("Sigma_xi vanishes identically");

  // rho = -tau Z, phi = T, xi = (Y - X)/2, v = -(X + Y)/2
  const Expr T = X(0), Xc = X(1), Yc = X(2), Zc = X(3);
  const std::array<Expr, 4> to_u = {
      T,
      (Yc - Xc) * 0.5,
      -tau_param() * Zc,
      -(Xc + Yc) * 0.5,
  };

  SigmaToUResult out;
  out.sigma_on_u = s.Sigma.substitute(to_u);
  const Expr sxi_on_u = Sxi.substitute(to_u);
  const Expr U = ln(sxi_on_u);

  const Expr L = lambda_param();
  const Expr ST = out.sigma_on_u.diff(0);
  const Expr STT = ST.diff(0);
  const Expr trans = (C(3.0) / (C(2.0) * L)) * (ST - T * STT);

  std::vector<Expr> loci_on_u;
  loci_on_u.reserve(s.extra_loci.size());
  for (const Expr& locus : s.extra_loci) loci_on_u.push_back(locus.substitute(to_u));

  UData u = make_u_data(U, {Expr(), Expr(), Expr(), Expr()}, s.lambda, std::move(loci_on_u));
  u.alpha = {-u.V, trans, trans, C(0.0)};
  out.u = std::move(u);
  out.constraint = STT - U.diff(1) - U.diff(2);
  return out;
}

// ---------------------------------------------------------------------------
// U formalism
// ---------------------------------------------------------------------------

UData make_u_data(Expr U, std::array<Expr, 4> alpha, cplx lambda, std::vector<Expr> extra_loci) {
  UData u;
  u.U = std::move(U);
  u.alpha = std::move(alpha);
  for (auto& a : u.alpha)
    if (!a.valid()) a = C(0.0);
  u.lambda = lambda;
  const Expr T = X(0);
  u.V = (C(1.5) * (T * u.U.diff(0) - C(2.0))) / lambda_param();
  u.extra_loci = std::move(extra_loci);
  return u;
}

MetricField build_u_metric(const UData& u) {
  if (!u.alpha[3].is_zero())
    throw Error("alpha must have no dZ component");
  const Expr T = X(0);
  const Expr eU = exp(u.U);
  const Expr pref = u.V * pow(T, -2.0);
  const Expr w = pow(u.V, -1.0) * pow(T, -2.0);

  MetricField m;
  m.params = {{"Lambda", u.lambda}};
  std::array<Expr, 10> g;
  for (auto& e : g) e = C(0.0);
  g[sym_index(0, 0)] = pref;
  g[sym_index(1, 1)] = pref * eU;
  g[sym_index(2, 2)] = -(pref * eU);
  const std::array<Expr, 4> beta = {u.alpha[0], u.alpha[1], u.alpha[2], C(1.0)};
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      g[sym_index(a, b)] = g[sym_index(a, b)] - w * beta[static_cast<size_t>(a)] * beta[static_cast<size_t>(b)];
  m.g = g;

  std::vector<Expr> extra = u.extra_loci;
  extra.push_back(u.V);
  m.chart = u_chart(std::move(extra));
  absorb_branch_loci(m.chart, m.g);
  return m;
}

AlphaResidualReport alpha_residual(const UData& u, const Point& p) {
  Params params{{"Lambda", u.lambda}};
  const Jet2 jU = jet_at(u.U, p, params);
  const Jet2 aT = jet_at(u.alpha[0], p, params);
  const Jet2 aX = jet_at(u.alpha[1], p, params);
  const Jet2 aY = jet_at(u.alpha[2], p, params);

  const cplx T = p[0];
  const cplx L = u.lambda;
  const cplx eU = std::exp(jU.v);
  const cplx U_T = jU.d[0];
  const cplx U_XT = jU.h[sym_index(0, 1)], U_YT = jU.h[sym_index(0, 2)];
  const cplx U_XX = jU.h[sym_index(1, 1)], U_YY = jU.h[sym_index(2, 2)];

  // d(alpha) components vs the right-hand two-form, basis dT^dX, dT^dY, dX^dY.
  const cplx lhs_tx = -(2.0 * L / 3.0) * (aX.d[0] - aT.d[1]);
  const cplx lhs_ty = -(2.0 * L / 3.0) * (aY.d[0] - aT.d[2]);
  const cplx lhs_xy = -(2.0 * L / 3.0) * (aY.d[1] - aX.d[2]);
  const cplx rhs_tx = T * U_YT;
  const cplx rhs_ty = T * U_XT;
  const cplx rhs_xy = eU * U_T - T * U_YY + T * U_XX;

  AlphaResidualReport r;
  r.residual = std::max({std::abs(lhs_tx - rhs_tx), std::abs(lhs_ty - rhs_ty),
                         std::abs(lhs_xy - rhs_xy)});
  const cplx U_TT = jU.h[sym_index(0, 0)];
  r.bfp = std::abs(eU * (U_TT + U_T * U_T) + U_XX - U_YY);
  return r;
}

double bfp_residual(const Expr& U, BfpVariant variant, const Chart& chart, const Point& p,
                    const Params& params) {
  chart.require_admissible(p, params);
  const Jet2 j = jet_at(U, p, params);
  const cplx eU = std::exp(j.v);
  const cplx ett = eU * (j.h[sym_index(0, 0)] + j.d[0] * j.d[0]);
  const cplx uxx = j.h[sym_index(1, 1)];
  const cplx uyy = j.h[sym_index(2, 2)];
  switch (variant) {
    case BfpVariant::complex_toda:
      return std::abs(ett + uxx - uyy);
    case BfpVariant::neutral_upper:
      return std::abs(ett - uxx - uyy);
    case BfpVariant::neutral_lower:
      return std::abs(ett + uxx - uyy);
    case BfpVariant::euclidean:
      return std::abs(ett + uxx + uyy);
  }
  throw Error("bad BFP variant");
}

double confflat_constraint_residual(const Expr& U, cplx a, const Chart& chart, const Point& p,
                                    const Params& params) {
  chart.require_admissible(p, params);
  const Jet2 j = jet_at(U, p, params);
  const cplx T = p[0];
  const cplx W = T * j.d[0] - 2.0;
  if (std::abs(W) < 1e-12) throw SingularPoint("T U_T - 2 within 1e-12 of zero");
  // (d_Y - d_X) (T W)^-2 ... = -2 (U_TY - U_TX) / (T W^3)
  const cplx rhs = -2.0 * (j.h[sym_index(0, 2)] - j.h[sym_index(0, 1)]) / (T * W * W * W);
  return std::abs(6.0 * a * std::exp(j.v) - rhs);
}

// ---------------------------------------------------------------------------
// Real slices
// ---------------------------------------------------------------------------

const char* slice_variant_name(SliceVariant v) {
  switch (v) {
    case SliceVariant::neutral_1: return "neutral_1";
    case SliceVariant::neutral_2: return "neutral_2";
    case SliceVariant::euclidean: return "euclidean";
    case SliceVariant::lorentzian: return "lorentzian";
  }
  return "?";
}

Box default_slice_box() {
  return Box{{{0.5, 1.5}, {-0.8, 0.8}, {-0.8, 0.8}, {0.0, 1.0}}};
}

namespace {

// Metric reality at sampled points; the chart is real-tagged, so leaking
// imaginary parts mean the payload does not descend to this slice.
void check_reality(const MetricField& m, const Box& box, int samples) {
  const auto pts = sample_points(m.chart, box, m.params, samples);
  for (const Point& p : pts) {
    const MetricPoint mp = metric_at(m, p);
    for (const cplx& v : mp.g)
      if (std::abs(v.imag()) > 1e-10 * std::max(1.0, mp.scale))
        throw ComplexLeak("metric component has imaginary part " +
                          std::to_string(v.imag()) + " at a real sample point");
  }
}

}  // namespace

SliceResult slice_transform(const UData& u, const SliceSpec& spec) {
  SliceResult out;
  out.variant = spec.variant;

  if (spec.variant == SliceVariant::lorentzian) {
    // Only the trivial payload admits this signature; anything else obstructs.
    Chart probe = u_chart(u.extra_loci);
    Params params{{"Lambda", u.lambda}};
    const auto pts = sample_points(probe, spec.box, params, spec.reality_samples);
    for (const Point& p : pts) {
      double a = std::abs(eval_value(u.U, p, params));
      for (int k = 0; k < 3; ++k) a = std::max(a, std::abs(eval_value(u.alpha[static_cast<size_t>(k)], p, params)));
      if (a > 1e-10)
        throw LorentzianObstruction("U or alpha nonzero at a sample point (max " +
                                    std::to_string(a) + ")");
    }
    const Expr L = lambda_param();
    const Expr xc = X(0), yc = X(1), zc = X(2), tc = X(3);
    const Expr den = (L / C(6.0)) * (zc + tc) - (zc - tc);
    const Expr pref = C(2.0) * pow(den, -2.0);
    MetricField m;
    m.params = {{"Lambda", u.lambda}};
    std::array<Expr, 10> g;
    for (auto& e : g) e = C(0.0);
    g[sym_index(0, 0)] = pref;
    g[sym_index(1, 1)] = pref;
    g[sym_index(2, 2)] = pref;
    g[sym_index(3, 3)] = -pref;
    m.g = g;
    m.chart = lorentz_chart({den});
    out.metric = std::move(m);
    out.slice_lambda = u.lambda;
    out.einstein_lambda = u.lambda;
    check_reality(out.metric, spec.box, spec.reality_samples);
    return out;
  }

  // Payload on the real chart plus the real-side constant.
  Expr Ur;
  std::array<Expr, 4> ar;
  std::vector<Expr> loci = u.extra_loci;
  if (spec.payload_is_real) {
    Ur = u.U;
    ar = u.alpha;
    out.slice_lambda = u.lambda;
  } else if (spec.variant == SliceVariant::neutral_1) {
    // Formulas carry over verbatim; only the constant is relabelled.
    Ur = u.U;
    ar = u.alpha;
    out.slice_lambda = -u.lambda / 3.0;
  } else {
    // T -> i t plus one more rotated axis, as a 1-form substitution.
    const Expr it = Expr::constant(kI) * X(0);
    std::array<Expr, 4> sub = {it, X(1), X(2), X(3)};
    std::array<cplx, 4> form_factor = {kI, 1.0, 1.0, 1.0};
    if (spec.variant == SliceVariant::neutral_2) {
      sub[2] = Expr::constant(kI) * X(2);
      form_factor[2] = kI;
      out.slice_lambda = -u.lambda / 3.0;
    } else {  // euclidean
      sub[1] = Expr::constant(kI) * X(1);
      form_factor[1] = kI;
      out.slice_lambda = u.lambda / 6.0;
    }
    Ur = u.U.substitute(sub);
    for (int k = 0; k < 3; ++k)
      ar[static_cast<size_t>(k)] =
          Expr::constant(form_factor[static_cast<size_t>(k)]) * u.alpha[static_cast<size_t>(k)].substitute(sub);
    ar[3] = C(0.0);
    for (Expr& locus : loci) locus = locus.substitute(sub);
  }

  const cplx Ls = out.slice_lambda;
  const Expr Lsx = Expr::constant(Ls);
  const Expr t = X(0);
  const Expr tUt = t * Ur.diff(0);

  Expr V;
  switch (spec.variant) {
    case SliceVariant::neutral_1:
      V = -(tUt - C(2.0)) / (C(2.0) * Lsx);
      out.einstein_lambda = -3.0 * Ls;
      break;
    case SliceVariant::neutral_2:
      V = (tUt - C(2.0)) / (C(2.0) * Lsx);
      out.einstein_lambda = -3.0 * Ls;
      break;
    case SliceVariant::euclidean:
      V = (tUt - C(2.0)) / (C(4.0) * Lsx);
      out.einstein_lambda = 6.0 * Ls;
      break;
    default:
      throw Error("unreachable");
  }

  const Expr eU = exp(Ur);
  const Expr pref = V * pow(t, -2.0);
  const Expr w = pow(V, -1.0) * pow(t, -2.0);
  const double z_sign = spec.variant == SliceVariant::euclidean ? +1.0 : -1.0;

  MetricField m;
  m.params = {{"Lambda", u.lambda}};
  std::array<Expr, 10> g;
  for (auto& e : g) e = C(0.0);
  switch (spec.variant) {
    case SliceVariant::neutral_1:  // e^U (dx^2 - dy^2) + dt^2
      g[sym_index(0, 0)] = pref;
      g[sym_index(1, 1)] = pref * eU;
      g[sym_index(2, 2)] = -(pref * eU);
      break;
    case SliceVariant::neutral_2:  // e^U (dx^2 + dy^2) - dt^2
      g[sym_index(0, 0)] = -pref;
      g[sym_index(1, 1)] = pref * eU;
      g[sym_index(2, 2)] = pref * eU;
      break;
    case SliceVariant::euclidean:  // e^U (dx^2 + dy^2) + dt^2
      g[sym_index(0, 0)] = pref;
      g[sym_index(1, 1)] = pref * eU;
      g[sym_index(2, 2)] = pref * eU;
      break;
    default:
      throw Error("unreachable");
  }
  const std::array<Expr, 4> beta = {ar[0], ar[1], ar[2], C(1.0)};
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      g[sym_index(a, b)] =
          g[sym_index(a, b)] + C(z_sign) * w * beta[static_cast<size_t>(a)] * beta[static_cast<size_t>(b)];
  m.g = g;

  loci.push_back(V);
  m.chart = slice_chart(std::move(loci));
  absorb_branch_loci(m.chart, m.g);
  out.metric = std::move(m);
  out.U = Ur;
  out.alpha = ar;
  out.V = V;
  check_reality(out.metric, spec.box, spec.reality_samples);
  return out;
}

double slice_v_residual(const SliceResult& s, const Point& p) {
  if (s.variant == SliceVariant::lorentzian) return 0.0;
  const MetricPoint mp = metric_at(s.metric, p);
  const cplx g_zz = mp.g[3 * 4 + 3];
  const cplx t = p[0];
  const double z_sign = s.variant == SliceVariant::euclidean ? +1.0 : -1.0;
  const cplx v_from_metric = z_sign / (g_zz * t * t);
  const cplx v_formula = eval_value(s.V, p, s.metric.params);
  return std::abs(v_from_metric - v_formula);
}

double slice_alpha_residual(const SliceResult& s, const Point& p) {
  if (s.variant == SliceVariant::lorentzian) return 0.0;
  const Params& params = s.metric.params;
  const Jet2 jU = jet_at(s.U, p, params);
  const Jet2 at = jet_at(s.alpha[0], p, params);
  const Jet2 ax = jet_at(s.alpha[1], p, params);
  const Jet2 ay = jet_at(s.alpha[2], p, params);

  const cplx t = p[0];
  const cplx L = s.slice_lambda;
  const cplx eU = std::exp(jU.v);
  const cplx U_t = jU.d[0];
  const cplx U_xt = jU.h[sym_index(0, 1)], U_yt = jU.h[sym_index(0, 2)];
  const cplx U_xx = jU.h[sym_index(1, 1)], U_yy = jU.h[sym_index(2, 2)];

  const cplx A_tx = ax.d[0] - at.d[1];
  const cplx A_ty = ay.d[0] - at.d[2];
  const cplx A_xy = ay.d[1] - ax.d[2];

  cplx lhs_tx, lhs_ty, lhs_xy, rhs_tx, rhs_ty, rhs_xy;
  if (s.variant == SliceVariant::euclidean) {
    lhs_tx = -4.0 * L * A_tx;
    lhs_ty = -4.0 * L * A_ty;
    lhs_xy = -4.0 * L * A_xy;
    rhs_tx = -t * U_yt;
    rhs_ty = t * U_xt;
    rhs_xy = eU * U_t + t * U_yy + t * U_xx;
  } else {
    const double ux_sign = s.variant == SliceVariant::neutral_2 ? -1.0 : +1.0;
    lhs_tx = 2.0 * L * A_tx;
    lhs_ty = 2.0 * L * A_ty;
    lhs_xy = 2.0 * L * A_xy;
    rhs_tx = t * U_yt;
    rhs_ty = ux_sign * t * U_xt;
    rhs_xy = eU * U_t + t * U_yy * (-1.0) + ux_sign * t * U_xx;
  }
  return std::max({std::abs(lhs_tx - rhs_tx), std::abs(lhs_ty - rhs_ty),
                   std::abs(lhs_xy - rhs_xy)});
}

double slice_bfp_residual(const SliceResult& s, const Point& p) {
  if (s.variant == SliceVariant::lorentzian) return 0.0;
  BfpVariant v;
  switch (s.variant) {
    case SliceVariant::neutral_1: v = BfpVariant::neutral_lower; break;
    case SliceVariant::neutral_2: v = BfpVariant::neutral_upper; break;
    default: v = BfpVariant::euclidean; break;
  }
  return bfp_residual(s.U, v, s.metric.chart, p, s.metric.params);
}

// ---------------------------------------------------------------------------
// Pullbacks
// ---------------------------------------------------------------------------

double pullback_compare(const MetricField& mA, const std::array<Expr, 4>& map,
                        const MetricField& mB, const std::vector<Point>& points) {
  double worst = 0.0;
  for (const Point& x : points) {
    const MetricPoint a = metric_at(mA, x);

    Point y;
    cplx J[4][4];  // J[c][i] = d map_c / d x_i
    for (int c = 0; c < 4; ++c) {
      const Jet2 j = eval_jet(map[static_cast<size_t>(c)], mA.chart, x, mA.params);
      y[static_cast<size_t>(c)] = j.v;
      for (int i = 0; i < 4; ++i) J[c][i] = j.d[static_cast<size_t>(i)];
    }
    const MetricPoint b = metric_at(mB, y);

    for (int i = 0; i < 4; ++i)
      for (int k = i; k < 4; ++k) {
        cplx pb(0.0);
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) pb += J[c][i] * J[d][k] * b.g[static_cast<size_t>(c * 4 + d)];
        worst = std::max(worst, std::abs(pb - a.g[static_cast<size_t>(i * 4 + k)]) / a.scale);
      }
  }
  return worst;
}

}  // namespace hh
