#include "hh/solutions.hpp"

#include <cmath>
#include <functional>

#include "hh/errors.hpp"
#include "hh/sampling.hpp"

namespace hh {

namespace {

const cplx kI(0.0, 1.0);

Expr C(double v) { return Expr::constant(v); }
Expr X(int i) { return Expr::coordinate(i); }
Expr Lp() { return Expr::parameter("Lambda"); }
Expr Tp() { return Expr::parameter("tau"); }

cplx getp(const Params& p, const std::string& name) {
  auto it = p.find(name);
  if (it == p.end()) throw UnboundParameter(name);
  return it->second;
}

Params merged(Params defaults, const Params& overrides) {
  for (const auto& [k, v] : overrides) defaults[k] = v;
  return defaults;
}

Expr slot_expr(const Overrides& ov, const std::string& name, const std::string& default_text,
               const std::array<std::string, 4>& coords) {
  std::string text = default_text;
  for (const auto& [k, v] : ov.slots)
    if (k == name) text = v;
  return parse_expr(text, coords);
}

std::string slot_text(const Overrides& ov, const std::string& name,
                      const std::string& default_text) {
  for (const auto& [k, v] : ov.slots)
    if (k == name) return v;
  return default_text;
}

KillingEntry killing_const(const std::string& name, int axis,
                           std::optional<KillingClass> cls = {}, Expr inv = {}) {
  KillingEntry e;
  e.name = name;
  for (int i = 0; i < 4; ++i) e.field.components[static_cast<size_t>(i)] = C(i == axis ? 1.0 : 0.0);
  e.expected_class = cls;
  e.expected_inv_plus = inv;
  return e;
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

Instantiation make_desitter_w0(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "desitter_w0";
  inst.record.formalism = Formalism::W;
  inst.record.params = merged({{"Lambda", 3.0}, {"tau", 1.0}}, ov.params);
  inst.record.box = Box{{{0.5, 2.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
  inst.record.notes = "tau normalized to 1";
  inst.record.payload_echo = {{"W", "0"}};

  WData w;
  w.W = C(0.0);
  w.tau = getp(inst.record.params, "tau");
  w.lambda = getp(inst.record.params, "Lambda");
  inst.w = w;
  inst.metric = build_w_metric(w);
  inst.metric.params = inst.record.params;

  ExpectedBlock& e = inst.record.expected;
  e.full_weyl_zero = true;
  e.tol_einstein = 1e-9;
  e.tol_weyl = 1e-9;
  e.tol_killing = 1e-9;

  const Expr phi = X(0), eta = X(1), t = X(2), wc = X(3);
  const Expr L = Lp(), tau = Tp();
  const Expr shift = phi - L * t / (C(3.0) * tau);          // recurring combination
  const Expr shift_half = phi * t - L * t * t / (C(6.0) * tau);

  const Expr inv_dt = C(-2.0) * L * L / (C(9.0) * tau * tau) * pow(phi, -2.0);
  e.killing.push_back(killing_const("d_t", 2, KillingClass::nonnull, inv_dt));
  e.killing.push_back(killing_const("d_w", 3, KillingClass::null_vector));
  e.killing.push_back(killing_const("d_eta", 1, KillingClass::null_vector));
  {
    KillingEntry k;
    k.name = "k4";
    k.field.components = {phi, C(2.0) * eta, t, C(0.0)};
    e.killing.push_back(k);
  }
  {
    KillingEntry k;
    k.name = "k5";
    k.field.components = {C(0.0), -eta, C(0.0), wc};
    e.killing.push_back(k);
  }
  {
    KillingEntry k;
    k.name = "k6";
    k.field.components = {C(0.0), C(0.0), eta, shift};
    e.killing.push_back(k);
  }
  {
    KillingEntry k;
    k.name = "k7";
    k.field.components = {C(0.0), shift, wc, C(0.0)};
    e.killing.push_back(k);
  }
  {
    KillingEntry k;
    k.name = "k8";
    k.field.components = {phi * wc, shift_half, t * wc, wc * wc};
    e.killing.push_back(k);
  }
  {
    KillingEntry k;
    k.name = "k9";
    k.field.components = {eta * phi, eta * eta, t * eta, shift_half};
    e.killing.push_back(k);
  }
  {
    KillingEntry k;
    k.name = "k10";
    k.field.components = {phi * shift, eta * shift,
                          wc * eta - L * t * t / (C(6.0) * tau), wc * shift};
    e.killing.push_back(k);
  }
  return inst;
}

Instantiation make_caseII(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "caseII_key_function";
  inst.record.formalism = Formalism::W;
  inst.record.params = merged({{"Lambda", 3.0}, {"tau", 1.0}}, ov.params);
  inst.record.box = Box{{{0.5, 1.5}, {0.2, 1.2}, {-1.0, 1.0}, {0.2, 1.2}}};
  inst.record.notes = "tau normalized to 1; key function linear in eta";

  const auto coords = w_chart().names;
  const Expr f1 = slot_expr(ov, "f1", "w", coords);
  const Expr f2 = slot_expr(ov, "f2", "1", coords);
  const Expr f3 = slot_expr(ov, "f3", "0", coords);
  const Expr f4 = slot_expr(ov, "f4", "0", coords);
  inst.record.payload_echo = {{"f1", slot_text(ov, "f1", "w")},
                              {"f2", slot_text(ov, "f2", "1")},
                              {"f3", slot_text(ov, "f3", "0")},
                              {"f4", slot_text(ov, "f4", "0")}};

  const Expr phi = X(0), eta = X(1);
  const Expr L = Lp(), tau = Tp();
  const Expr tau2_L = tau * tau / L;
  WData w;
  w.W = (f1 * phi + f2) * eta +
        tau2_L * (f1 * f1 + f1.diff(3) / tau) * phi * phi * phi +
        C(3.0) * tau2_L * (C(2.0) * f1 * f2 + f2.diff(3) / tau) * phi * phi +
        f3 * phi + f4;
  w.tau = getp(inst.record.params, "tau");
  w.lambda = getp(inst.record.params, "Lambda");
  inst.w = w;
  inst.metric = build_w_metric(w);
  inst.metric.params = inst.record.params;

  ExpectedBlock& e = inst.record.expected;
  e.full_weyl_zero = true;
  const Expr inv_dt = C(-2.0) * L * L / (C(9.0) * tau * tau) * pow(phi, -2.0);
  e.killing.push_back(killing_const("d_t", 2, KillingClass::nonnull, inv_dt));
  return inst;
}

Instantiation make_desitter_conformal(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "desitter_conformal";
  inst.record.formalism = Formalism::explicit_metric;
  inst.record.params = merged({{"Lambda", 3.0},
                               {"alpha0", 1.0},
                               {"beta0", 0.0},
                               {"mu0", 0.0},
                               {"gamma0", 0.0},
                               {"delta0", 0.0},
                               {"epsilon0", 0.5}},
                              ov.params);
  inst.record.box = Box{{{0.3, 1.2}, {0.3, 1.2}, {0.3, 1.2}, {0.3, 1.2}}};
  inst.record.payload_echo = {
      {"Phi", "alpha0*(xi*zeta + u*v) + beta0*zeta + mu0*xi + gamma0*u + delta0*v + epsilon0"}};

  const Params& P = inst.record.params;
  const cplx lambda = getp(P, "Lambda");
  const cplx cons = getp(P, "alpha0") * getp(P, "epsilon0") - getp(P, "beta0") * getp(P, "mu0") -
                    getp(P, "gamma0") * getp(P, "delta0");
  if (std::abs(lambda / 6.0 - cons) > 1e-12)
    throw ConstraintViolation("Lambda/6 != alpha0*epsilon0 - beta0*mu0 - gamma0*delta0 (got " +
                              std::to_string(cons.real()) + ")");

  const Expr xi = X(0), zeta = X(1), u = X(2), v = X(3);
  const Expr Phi = Expr::parameter("alpha0") * (xi * zeta + u * v) +
                   Expr::parameter("beta0") * zeta + Expr::parameter("mu0") * xi +
                   Expr::parameter("gamma0") * u + Expr::parameter("delta0") * v +
                   Expr::parameter("epsilon0");
  const Expr pref = pow(Phi, -2.0);
  MetricField m;
  m.params = P;
  for (auto& g : m.g) g = C(0.0);
  m.g[sym_index(0, 1)] = pref;
  m.g[sym_index(2, 3)] = pref;
  m.chart = null_conformal_chart({Phi});
  inst.metric = std::move(m);

  ExpectedBlock& e = inst.record.expected;
  e.full_weyl_zero = true;
  e.tol_einstein = 1e-9;
  e.tol_weyl = 1e-9;
  return inst;
}

Instantiation make_desitter_simple_v(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "desitter_simple_v";
  inst.record.formalism = Formalism::explicit_metric;
  inst.record.params = merged({{"Lambda", 3.0}}, ov.params);
  inst.record.box = Box{{{0.3, 1.2}, {0.3, 1.2}, {2.2, 3.0}, {0.2, 0.8}}};
  inst.record.payload_echo = {{"Phi", "(Lambda/6)*u - v"}};

  const Expr u = X(2), v = X(3);
  const Expr Phi = Lp() / C(6.0) * u - v;
  const Expr pref = pow(Phi, -2.0);
  MetricField m;
  m.params = inst.record.params;
  for (auto& g : m.g) g = C(0.0);
  m.g[sym_index(0, 1)] = pref;
  m.g[sym_index(2, 3)] = pref;
  m.chart = null_conformal_chart({Phi});
  inst.metric = std::move(m);

  ExpectedBlock& e = inst.record.expected;
  e.full_weyl_zero = true;
  e.tol_einstein = 1e-9;
  e.tol_weyl = 1e-9;
  e.killing.push_back(killing_const("d_xi", 0, KillingClass::null_vector));
  e.killing.push_back(killing_const("d_zeta", 1, KillingClass::null_vector));
  return inst;
}

Expr u_form_killing_invariant() {
  // -(2/9) Lambda^2 / T^2
  return C(-2.0 / 9.0) * Lp() * Lp() * pow(X(0), -2.0);
}

Instantiation make_desitter_u_form(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "desitter_u_form";
  inst.record.formalism = Formalism::U;
  inst.record.params = merged({{"Lambda", 3.0}}, ov.params);
  inst.record.box = Box{{{0.5, 2.0}, {-1.0, 1.0}, {-1.0, 1.0}, {0.0, 1.0}}};
  inst.record.payload_echo = {{"U", "0"}, {"alpha", "0"}};

  UData u = make_u_data(C(0.0), {C(0.0), C(0.0), C(0.0), C(0.0)},
                        getp(inst.record.params, "Lambda"));
  inst.u = u;
  inst.metric = build_u_metric(u);
  inst.metric.params = inst.record.params;

  ExpectedBlock& e = inst.record.expected;
  e.full_weyl_zero = true;
  e.tol_einstein = 1e-9;
  e.tol_weyl = 1e-9;
  e.killing.push_back(killing_const("d_Z", 3, KillingClass::nonnull, u_form_killing_invariant()));
  e.slices = {SliceVariant::neutral_1, SliceVariant::neutral_2, SliceVariant::euclidean,
              SliceVariant::lorentzian};
  return inst;
}

Expr sigma_killing_invariant() {
  // -(2/9) (Lambda/tau)^2 / phi^2: the d_rho invariant for every Sigma family
  return C(-2.0 / 9.0) * Lp() * Lp() / (Tp() * Tp()) * pow(X(0), -2.0);
}

Instantiation sigma_family_common(Instantiation inst, SigmaData s) {
  inst.sigma = s;
  inst.metric = build_sigma_metric(s);
  inst.metric.params = inst.record.params;
  ExpectedBlock& e = inst.record.expected;
  e.sd_weyl_zero = true;
  e.killing.push_back(
      killing_const("d_rho", 2, KillingClass::nonnull, sigma_killing_invariant()));
  return inst;
}

Instantiation make_sigma_xi_phi(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "sigma_xi_phi";
  inst.record.formalism = Formalism::Sigma;
  inst.record.params = merged({{"Lambda", 3.0}, {"tau", 1.0}}, ov.params);
  inst.record.box = Box{{{0.5, 1.5}, {0.4, 1.2}, {0.0, 1.0}, {0.0, 1.0}}};
  inst.record.notes = "equivalent to U = ln T";
  inst.record.payload_echo = {{"Sigma", "phi*xi"}};

  SigmaData s;
  s.Sigma = X(0) * X(1);
  s.tau = getp(inst.record.params, "tau");
  s.lambda = getp(inst.record.params, "Lambda");
  inst = sigma_family_common(std::move(inst), s);
  inst.record.expected.asd_weyl_nonzero = true;
  return inst;
}

Instantiation make_sigma_family_1(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "sigma_family_1";
  inst.record.formalism = Formalism::Sigma;
  inst.record.params = merged({{"Lambda", 3.0}, {"tau", 1.0}}, ov.params);
  inst.record.box = Box{{{0.7, 1.6}, {0.3, 0.9}, {0.0, 1.0}, {-0.5, 0.5}}};
  inst.record.notes = "defaults f=v, a=xi, b=xi^2 keep a_xi and Sigma_phixi nonzero";

  const auto coords = sigma_chart().names;
  const Expr f = slot_expr(ov, "f", "v", coords);
  const Expr a = slot_expr(ov, "a", "xi", coords);
  const Expr b = slot_expr(ov, "b", "xi^2", coords);
  inst.record.payload_echo = {{"f", slot_text(ov, "f", "v")},
                              {"a", slot_text(ov, "a", "xi")},
                              {"b", slot_text(ov, "b", "xi^2")}};

  const Expr phi = X(0);
  SigmaData s;
  s.Sigma = C(-0.5) * f.diff(3) * phi * phi + exp(f) * (a * phi + b);
  s.tau = getp(inst.record.params, "tau");
  s.lambda = getp(inst.record.params, "Lambda");
  inst = sigma_family_common(std::move(inst), s);
  inst.record.expected.asd_weyl_nonzero = true;
  return inst;
}

Instantiation make_sigma_family_2(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "sigma_family_2";
  inst.record.formalism = Formalism::Sigma;
  inst.record.params = merged({{"Lambda", 3.0}, {"tau", 1.0}}, ov.params);
  inst.record.box = Box{{{0.8, 1.6}, {0.3, 1.0}, {0.0, 1.0}, {0.1, 0.6}}};
  inst.record.notes = "defaults f=v, g=v, a=xi; phi+g stays positive on the box";

  const auto coords = sigma_chart().names;
  const Expr f = slot_expr(ov, "f", "v", coords);
  const Expr g = slot_expr(ov, "g", "v", coords);
  const Expr a = slot_expr(ov, "a", "xi", coords);
  inst.record.payload_echo = {{"f", slot_text(ov, "f", "v")},
                              {"g", slot_text(ov, "g", "v")},
                              {"a", slot_text(ov, "a", "xi")}};

  const Expr phi = X(0);
  const Expr pg = phi + g;
  SigmaData s;
  s.Sigma = C(-0.5) * f.diff(3) * phi * phi + a * exp(f) * pg - g.diff(3) * pg * ln(pg);
  s.tau = getp(inst.record.params, "tau");
  s.lambda = getp(inst.record.params, "Lambda");
  s.extra_loci = {pg};
  inst = sigma_family_common(std::move(inst), s);
  inst.record.expected.asd_weyl_nonzero = true;
  return inst;
}

Instantiation make_u_harmonic_complex(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "u_harmonic_complex";
  inst.record.formalism = Formalism::U;
  inst.record.params = merged({{"Lambda", 3.0}}, ov.params);
  inst.record.box = Box{{{0.5, 1.5}, {-0.6, 0.6}, {-0.6, 0.6}, {0.0, 1.0}}};

  const auto coords = u_chart().names;
  const Expr U = slot_expr(ov, "U", "(X+Y)^2", coords);
  inst.record.payload_echo = {{"U", slot_text(ov, "U", "(X+Y)^2")}, {"alpha", "0"}};

  UData u = make_u_data(U, {C(0.0), C(0.0), C(0.0), C(0.0)},
                        getp(inst.record.params, "Lambda"));
  inst.u = u;
  inst.metric = build_u_metric(u);
  inst.metric.params = inst.record.params;

  ExpectedBlock& e = inst.record.expected;
  e.full_weyl_zero = true;
  e.killing.push_back(killing_const("d_Z", 3, KillingClass::nonnull, u_form_killing_invariant()));
  return inst;
}

Instantiation make_u_confflat_1(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "u_confflat_1";
  inst.record.formalism = Formalism::U;
  inst.record.params = merged({{"Lambda", 3.0}, {"b", 1.0}}, ov.params);
  inst.record.box = Box{{{0.6, 1.5}, {-0.3, 0.3}, {-0.3, 0.3}, {0.0, 1.0}}};
  inst.record.notes =
      "transverse part solves the Liouville reduction: S = -2 ln(1 + (3b/2)(X^2 - Y^2)); c = 0";
  inst.record.payload_echo = {
      {"U", "ln(6*b*T^2 - 1) - 2*ln(1 + (3*b/2)*(X^2 - Y^2))"}, {"alpha", "0"}};

  const Expr T = X(0), Xc = X(1), Yc = X(2);
  const Expr b = C(getp(inst.record.params, "b").real());
  const Expr radial = C(6.0) * b * T * T - C(1.0);
  const Expr transverse = C(1.0) + C(1.5) * b * (Xc * Xc - Yc * Yc);
  UData u = make_u_data(ln(radial) - C(2.0) * ln(transverse),
                        {C(0.0), C(0.0), C(0.0), C(0.0)},
                        getp(inst.record.params, "Lambda"));
  u.extra_loci = {radial, transverse};
  inst.u = u;
  inst.metric = build_u_metric(u);
  inst.metric.params = inst.record.params;

  ExpectedBlock& e = inst.record.expected;
  e.full_weyl_zero = true;
  e.killing.push_back(killing_const("d_Z", 3, KillingClass::nonnull, u_form_killing_invariant()));
  return inst;
}

Instantiation make_tod_harmonic(const Overrides& ov) {
  Instantiation inst;
  inst.record.id = "tod_harmonic";
  inst.record.formalism = Formalism::U;
  inst.record.payload_is_real = true;
  inst.record.real_variant = SliceVariant::euclidean;
  inst.record.params = merged({{"Lambda", -0.5}}, ov.params);
  inst.record.box = Box{{{0.5, 1.5}, {-0.6, 0.6}, {-0.6, 0.6}, {0.0, 1.0}}};
  inst.record.notes = "real Euclidean-side payload; Lambda < 0 keeps V positive";

  const auto coords = slice_chart().names;
  const Expr U = slot_expr(ov, "U", "x^2 - y^2", coords);
  inst.record.payload_echo = {{"U", slot_text(ov, "U", "x^2 - y^2")}, {"alpha", "0"}};

  UData u = make_u_data(U, {C(0.0), C(0.0), C(0.0), C(0.0)},
                        getp(inst.record.params, "Lambda"));
  inst.u = u;

  SliceSpec spec;
  spec.variant = SliceVariant::euclidean;
  spec.payload_is_real = true;
  spec.box = inst.record.box;
  const SliceResult sr = slice_transform(u, spec);
  inst.metric = sr.metric;
  inst.metric.params = inst.record.params;

  ExpectedBlock& e = inst.record.expected;
  e.lambda_eff_factor = 6.0;
  e.signature = std::array<int, 2>{4, 0};
  // 8 Lambda^2 / t^2, the Euclidean-side invariant of d_z
  const Expr inv = C(8.0) * Lp() * Lp() * pow(X(0), -2.0);
  e.killing.push_back(killing_const("d_z", 3, KillingClass::nonnull, inv));
  e.slices = {SliceVariant::euclidean};
  return inst;
}

using Maker = Instantiation (*)(const Overrides&);

const std::vector<std::pair<std::string, Maker>>& families() {
  static const std::vector<std::pair<std::string, Maker>> fam = {
      {"desitter_w0", &make_desitter_w0},
      {"caseII_key_function", &make_caseII},
      {"desitter_conformal", &make_desitter_conformal},
      {"desitter_simple_v", &make_desitter_simple_v},
      {"desitter_u_form", &make_desitter_u_form},
      {"sigma_xi_phi", &make_sigma_xi_phi},
      {"sigma_family_1", &make_sigma_family_1},
      {"sigma_family_2", &make_sigma_family_2},
      {"u_harmonic_complex", &make_u_harmonic_complex},
      {"u_confflat_1", &make_u_confflat_1},
      {"tod_harmonic", &make_tod_harmonic},
  };
  return fam;
}

}  // namespace

const char* formalism_name(Formalism f) {
  switch (f) {
    case Formalism::W: return "W";
    case Formalism::Sigma: return "Sigma";
    case Formalism::U: return "U";
    case Formalism::explicit_metric: return "explicit_metric";
  }
  return "?";
}

std::vector<std::string> catalog() {
  std::vector<std::string> ids;
  ids.reserve(families().size());
  for (const auto& [id, mk] : families()) ids.push_back(id);
  return ids;
}

Instantiation instantiate(const std::string& id, const Overrides& ov) {
  for (const auto& [fid, mk] : families())
    if (fid == id) return mk(ov);
  throw UnknownFamily(id);
}

// ---------------------------------------------------------------------------
// Chart equivalences
// ---------------------------------------------------------------------------

std::array<Expr, 4> map_simple_v_to_w0(cplx lambda, cplx tau) {
  const Expr xi = X(0), zeta = X(1), u = X(2), v = X(3);
  const Expr L = Expr::constant(lambda), T = Expr::constant(tau);
  return {(L / C(6.0) * u - v) / T, xi / T, u, zeta};
}

std::array<Expr, 4> map_simple_v_to_u_form(cplx lambda, cplx tau) {
  const Expr xi = X(0), zeta = X(1), u = X(2), v = X(3);
  const Expr L = Expr::constant(lambda), T = Expr::constant(tau);
  return {(L / C(6.0) * u - v) / T,
          L * xi / (C(3.0) * T * T) - zeta / C(2.0),
          C(0.0) - L * xi / (C(3.0) * T * T) - zeta / C(2.0),
          (u / C(2.0) + C(3.0) * v / L) / T};
}

std::array<Expr, 4> map_w0_to_u_form(cplx lambda, cplx tau) {
  const Expr phi = X(0), eta = X(1), t = X(2), w = X(3);
  const Expr L = Expr::constant(lambda), T = Expr::constant(tau);
  const Expr half_span = L * eta / (C(3.0) * T);
  return {phi, half_span - w / C(2.0), C(0.0) - half_span - w / C(2.0),
          t / T - C(3.0) * phi / L};
}

std::array<Expr, 4> map_lorentz_to_simple_v() {
  const Expr x = X(0), y = X(1), z = X(2), t = X(3);
  const Expr iy = Expr::constant(kI) * y;
  const Expr inv_root2 = Expr::constant(1.0 / std::sqrt(2.0));
  return {(x + iy) * inv_root2, (x - iy) * inv_root2, (z + t) * inv_root2, (z - t) * inv_root2};
}

std::array<Expr, 4> map_sigma_to_u(cplx tau) {
  const Expr phi = X(0), xi = X(1), rho = X(2), v = X(3);
  const Expr T = Expr::constant(tau);
  return {phi, C(0.0) - v - xi, xi - v, C(0.0) - rho / T};
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

namespace {

struct MaxTracker {
  double value = 0.0;
  Point at{};
  void feed(double v, const Point& p) {
    if (v >= value) {
      value = v;
      at = p;
    }
  }
};

Check residual_check(const std::string& name, const MaxTracker& t, double tol) {
  return Check{name, t.value, tol, t.value <= tol, t.at};
}

}  // namespace

VerifyResult verify_instantiation(const Instantiation& inst, int points, double tol_override,
                                  int threads) {
  const SolutionRecord& rec = inst.record;
  VerifyResult out;
  out.family = rec.id;
  out.params = rec.params;

  const auto tol = [&](double def) { return tol_override > 0.0 ? tol_override : def; };
  const ExpectedBlock& e = rec.expected;

  const auto pts = sample_points(inst.metric.chart, rec.box, inst.metric.params, points);
  out.points_evaluated = static_cast<int>(pts.size());

  // Inverse consistency
  {
    MaxTracker t;
    for (const Point& p : pts) {
      const MetricPoint mp = metric_at(inst.metric, p);
      double worst = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          cplx s(0.0);
          for (int c = 0; c < 4; ++c)
            s += mp.g[static_cast<size_t>(a * 4 + c)] * mp.ginv[static_cast<size_t>(c * 4 + b)];
          worst = std::max(worst, std::abs(s - (a == b ? cplx(1.0) : cplx(0.0))));
        }
      t.feed(worst, p);
    }
    out.checks.push_back(residual_check("inverse_consistency", t, 1e-12));
  }

  // Formalism residual operators
  switch (rec.formalism) {
    case Formalism::W: {
      MaxTracker t;
      for (const Point& p : pts) t.feed(heavenly_residual(*inst.w, p), p);
      out.checks.push_back(residual_check("heavenly_residual", t, tol(e.tol_residual)));
      break;
    }
    case Formalism::Sigma: {
      MaxTracker t;
      double min_phixi = 1e300, min_omegaxi = 1e300;
      for (const Point& p : pts) {
        const SigmaResidualReport r = sigma_residual(*inst.sigma, p);
        t.feed(r.residual, p);
        min_phixi = std::min(min_phixi, std::abs(r.sigma_phixi));
        min_omegaxi = std::min(min_omegaxi, std::abs(r.omega_xi));
      }
      out.checks.push_back(residual_check("crucial_residual", t, tol(e.tol_residual)));
      out.checks.push_back(Check{"sigma_phixi_min", min_phixi, 1e-6, min_phixi > 1e-6, {}});
      out.checks.push_back(Check{"omega_xi_min", min_omegaxi, 1e-6, min_omegaxi > 1e-6, {}});
      break;
    }
    case Formalism::U: {
      if (!rec.payload_is_real) {
        MaxTracker tb, ta;
        for (const Point& p : pts) {
          const AlphaResidualReport r = alpha_residual(*inst.u, p);
          ta.feed(r.residual, p);
          tb.feed(r.bfp, p);
        }
        out.checks.push_back(residual_check("bfp_residual", tb, tol(e.tol_residual)));
        out.checks.push_back(residual_check("alpha_residual", ta, tol(e.tol_residual)));
      } else {
        SliceSpec spec;
        spec.variant = rec.real_variant;
        spec.payload_is_real = true;
        spec.box = rec.box;
        const SliceResult sr = slice_transform(*inst.u, spec);
        MaxTracker tb, ta, tv;
        for (const Point& p : pts) {
          tb.feed(slice_bfp_residual(sr, p), p);
          ta.feed(slice_alpha_residual(sr, p), p);
          tv.feed(slice_v_residual(sr, p), p);
        }
        out.checks.push_back(residual_check("bfp_residual", tb, tol(e.tol_residual)));
        out.checks.push_back(residual_check("alpha_residual", ta, tol(e.tol_residual)));
        out.checks.push_back(residual_check("v_formula_residual", tv, tol(e.tol_residual)));
      }
      break;
    }
    case Formalism::explicit_metric:
      break;
  }

  // Curvature certificate
  if (e.einstein) {
    const cplx lambda_eff = e.lambda_eff_factor * getp(rec.params, "Lambda");
    const CertificateStats st = einstein_certificate(inst.metric, lambda_eff, pts, threads);
    out.checks.push_back(Check{"max_einstein_residual", st.max_einstein_residual, tol(e.tol_einstein),
                               st.max_einstein_residual <= tol(e.tol_einstein), st.worst_point});
    out.checks.push_back(Check{"max_scalar_deviation", st.max_scalar_deviation, tol(e.tol_einstein),
                               st.max_scalar_deviation <= tol(e.tol_einstein), st.worst_point});
    if (e.full_weyl_zero)
      out.checks.push_back(Check{"max_full_weyl", st.max_weyl, tol(e.tol_weyl),
                                 st.max_weyl <= tol(e.tol_weyl), st.worst_point});
    if (e.sd_weyl_zero || e.full_weyl_zero)
      out.checks.push_back(Check{"max_sd_weyl", st.max_sd_weyl, tol(e.tol_weyl),
                                 st.max_sd_weyl <= tol(e.tol_weyl), st.worst_point});
    if (e.asd_weyl_nonzero)
      out.checks.push_back(
          Check{"asd_weyl_nonzero", st.max_asd_weyl, 1e-3, st.max_asd_weyl > 1e-3, {}});
  }

  // Reality on real-tagged charts
  if (inst.metric.chart.field_tag == FieldTag::real) {
    MaxTracker t;
    for (const Point& p : pts) {
      const MetricPoint mp = metric_at(inst.metric, p);
      double worst = 0.0;
      for (const cplx& v : mp.g) worst = std::max(worst, std::abs(v.imag()) / mp.scale);
      t.feed(worst, p);
    }
    out.checks.push_back(residual_check("reality_leak", t, 1e-10));
  }

  // Signature stability
  if (e.signature) {
    int mismatches = 0;
    for (const Point& p : pts) {
      const MetricPoint mp = metric_at(inst.metric, p);
      std::array<double, 16> gr{};
      for (size_t k = 0; k < 16; ++k) gr[k] = mp.g[k].real();
      const auto sig = sym4_signature(gr, 1e-10 * mp.scale);
      if (sig != *e.signature) ++mismatches;
    }
    out.checks.push_back(
        Check{"signature", static_cast<double>(mismatches), 0.0, mismatches == 0, {}});
  }

  // Killing fields
  for (const KillingEntry& k : e.killing) {
    MaxTracker t;
    for (const Point& p : pts) t.feed(killing_residual(inst.metric, k.field, p), p);
    out.checks.push_back(
        residual_check("killing_residual:" + k.name, t, tol(e.tol_killing)));
    if (!k.expected_class) continue;

    KillingReport rep;
    try {
      rep = classify_killing(inst.metric, k.field, pts);
    } catch (const TheoremViolation& tv) {
      out.checks.push_back(Check{"killing_class:" + k.name, 1.0, 0.0, false, {}});
      continue;
    }
    out.kappa = rep.kappa;
    const bool match = rep.classification == *k.expected_class;
    out.checks.push_back(
        Check{"killing_class:" + k.name, match ? 0.0 : 1.0, 0.0, match, {}});

    if (k.expected_inv_plus.valid() && *k.expected_class == KillingClass::nonnull) {
      MaxTracker ti;
      for (const Point& p : pts) {
        const auto inv = l_invariants(inst.metric, k.field, p);
        const cplx want = eval_value(k.expected_inv_plus, p, inst.metric.params);
        ti.feed(std::abs(inv.first - want) / std::abs(want), p);
      }
      out.checks.push_back(residual_check("killing_invariant:" + k.name, ti, tol(1e-8)));
    }
  }

  out.pass = true;
  for (const Check& c : out.checks) out.pass = out.pass && c.pass;
  return out;
}

VerifyResult verify_family(const std::string& id, int points, double tol_override,
                           const Overrides& ov, int threads) {
  return verify_instantiation(instantiate(id, ov), points, tol_override, threads);
}

}  // namespace hh
