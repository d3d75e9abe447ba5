#include "hh/runner.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "hh/errors.hpp"
#include "hh/sampling.hpp"

namespace hh {

namespace {

bool parse_double(const std::string& s, double* out) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') return false;
  *out = v;
  return true;
}

Overrides build_overrides(const RunConfig& cfg) {
  Overrides ov;
  for (const auto& [k, v] : cfg.sets) {
    double num;
    if (parse_double(v, &num)) ov.params[k] = num;
    ov.slots.emplace_back(k, v);
  }
  if (cfg.lambda) ov.params["Lambda"] = *cfg.lambda;
  if (cfg.tau) ov.params["tau"] = *cfg.tau;
  return ov;
}

void apply_params(Instantiation& inst, const Params& extra) {
  for (const auto& [k, v] : extra) {
    inst.record.params[k] = v;
    inst.metric.params[k] = v;
  }
  const cplx lambda = inst.record.params.count("Lambda") ? inst.record.params["Lambda"] : 3.0;
  const cplx tau = inst.record.params.count("tau") ? inst.record.params["tau"] : 1.0;
  if (inst.w) {
    inst.w->lambda = lambda;
    inst.w->tau = tau;
  }
  if (inst.sigma) {
    inst.sigma->lambda = lambda;
    inst.sigma->tau = tau;
  }
  if (inst.u) inst.u->lambda = lambda;
}

int emit(const RunConfig& cfg, const Json& report, bool pass, std::ostream& out) {
  const std::string text = report.dump();
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_text_file(cfg.out, text);
    out << (pass ? "PASS" : "FAIL") << " -> " << cfg.out << "\n";
  }
  return pass ? 0 : 1;
}

Json error_report(const std::string& command, const std::string& family,
                  const std::string& what) {
  Json o = Json::object();
  o.set("schema", Json::integer(1));
  o.set("command", Json::string(command));
  o.set("family", Json::string(family));
  Json errs = Json::array();
  errs.push(Json::string(what));
  o.set("errors", std::move(errs));
  o.set("pass", Json::boolean(false));
  return o;
}

SliceVariant parse_variant(const std::string& name) {
  if (name == "neutral_1") return SliceVariant::neutral_1;
  if (name == "neutral_2") return SliceVariant::neutral_2;
  if (name == "euclidean") return SliceVariant::euclidean;
  if (name == "lorentzian") return SliceVariant::lorentzian;
  throw ConfigError("unknown slice variant \"" + name + "\"");
}

std::string signature_string(const std::array<int, 2>& sig) {
  return std::string(static_cast<size_t>(sig[0]), '+') +
         std::string(static_cast<size_t>(sig[1]), '-');
}

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

Instantiation load_config_family(const RunConfig& cfg) {
  if (!cfg.file.empty()) {
    Instantiation inst = load_family_file(cfg.file);
    apply_params(inst, build_overrides(cfg).params);
    return inst;
  }
  return instantiate(cfg.family, build_overrides(cfg));
}

// ---------------------------------------------------------------------------

int run_verify(const RunConfig& cfg, std::ostream& out) {
  Instantiation inst = load_config_family(cfg);
  if (cfg.box) inst.record.box = *cfg.box;
  const VerifyResult r =
      verify_instantiation(inst, cfg.points, cfg.tol, worker_count());
  return emit(cfg, verify_report(r, "verify"), r.pass, out);
}

int run_pipeline(const RunConfig& cfg, std::ostream& out) {
  Instantiation inst = load_config_family(cfg);
  if (inst.record.formalism != Formalism::Sigma || !inst.sigma)
    throw ConfigError("pipeline needs a Sigma-formalism family");
  if (cfg.box) inst.record.box = *cfg.box;

  const double rtol = cfg.tol > 0.0 ? cfg.tol : 1e-10;
  const double ctol = cfg.tol > 0.0 ? cfg.tol : 1e-8;

  const auto pts = sample_points(inst.metric.chart, inst.record.box, inst.metric.params,
                                 cfg.points);
  VerifyResult r;
  r.family = inst.record.id;
  r.params = inst.record.params;
  r.points_evaluated = static_cast<int>(pts.size());

  MaxTracker crucial;
  for (const Point& p : pts) crucial.feed(sigma_residual(*inst.sigma, p).residual, p);
  r.checks.push_back(residual_check("crucial_residual", crucial, rtol));

  const SigmaToUResult conv = sigma_to_u(*inst.sigma);
  const MetricField mu = build_u_metric(conv.u);
  const auto to_u = map_sigma_to_u(inst.sigma->tau);

  std::vector<Point> upts;
  upts.reserve(pts.size());
  for (const Point& p : pts) {
    Point q;
    for (int c = 0; c < 4; ++c)
      q[static_cast<size_t>(c)] = eval_value(to_u[static_cast<size_t>(c)], p, inst.metric.params);
    upts.push_back(q);
  }

  MaxTracker bfp, alpha, constraint;
  for (const Point& q : upts) {
    const AlphaResidualReport ar = alpha_residual(conv.u, q);
    bfp.feed(ar.bfp, q);
    alpha.feed(ar.residual, q);
    constraint.feed(std::abs(eval_value(conv.constraint, q, mu.params)), q);
  }
  r.checks.push_back(residual_check("bfp_residual", bfp, rtol));
  r.checks.push_back(residual_check("alpha_residual", alpha, rtol));
  r.checks.push_back(residual_check("sigma_constraint_residual", constraint, rtol));

  const CertificateStats st = einstein_certificate(mu, conv.u.lambda, upts, worker_count());
  r.checks.push_back(Check{"max_einstein_residual", st.max_einstein_residual, ctol,
                           st.max_einstein_residual <= ctol, st.worst_point});
  r.checks.push_back(Check{"max_scalar_deviation", st.max_scalar_deviation, ctol,
                           st.max_scalar_deviation <= ctol, st.worst_point});
  r.checks.push_back(
      Check{"max_sd_weyl", st.max_sd_weyl, ctol, st.max_sd_weyl <= ctol, st.worst_point});

  const double pb = pullback_compare(inst.metric, to_u, mu, pts);
  r.checks.push_back(Check{"pullback_step4", pb, ctol, pb <= ctol, {}});

  r.pass = true;
  for (const Check& c : r.checks) r.pass = r.pass && c.pass;
  return emit(cfg, verify_report(r, "pipeline"), r.pass, out);
}

Box slice_default_box(SliceVariant v) {
  if (v == SliceVariant::lorentzian)
    return Box{{{-1.0, 1.0}, {-1.0, 1.0}, {0.2, 0.8}, {1.2, 2.0}}};
  return default_slice_box();
}

int run_slice(const RunConfig& cfg, std::ostream& out) {
  Instantiation inst = load_config_family(cfg);
  const SliceVariant variant = parse_variant(cfg.variant);

  UData u;
  if (inst.u) {
    u = *inst.u;
  } else if (inst.sigma) {
    u = sigma_to_u(*inst.sigma).u;
  } else {
    throw ConfigError("family \"" + inst.record.id + "\" has no potential form to slice");
  }

  SliceSpec spec;
  spec.variant = variant;
  spec.payload_is_real = inst.record.payload_is_real;
  spec.box = cfg.box ? *cfg.box
                     : (inst.record.payload_is_real ? inst.record.box : slice_default_box(variant));

  const SliceResult sr = slice_transform(u, spec);

  VerifyResult r;
  r.family = inst.record.id;
  r.params = inst.record.params;

  const auto pts = sample_points(sr.metric.chart, spec.box, sr.metric.params, cfg.points);
  r.points_evaluated = static_cast<int>(pts.size());
  const double ctol = cfg.tol > 0.0 ? cfg.tol : 1e-8;
  const double rtol = cfg.tol > 0.0 ? cfg.tol : 1e-10;

  const CertificateStats st = einstein_certificate(sr.metric, sr.einstein_lambda, pts,
                                                   worker_count());
  r.checks.push_back(Check{"max_einstein_residual", st.max_einstein_residual, ctol,
                           st.max_einstein_residual <= ctol, st.worst_point});
  r.checks.push_back(Check{"max_scalar_deviation", st.max_scalar_deviation, ctol,
                           st.max_scalar_deviation <= ctol, st.worst_point});

  MaxTracker vres, ares, bres, leak;
  for (const Point& p : pts) {
    vres.feed(slice_v_residual(sr, p), p);
    ares.feed(slice_alpha_residual(sr, p), p);
    bres.feed(slice_bfp_residual(sr, p), p);
    const MetricPoint mp = metric_at(sr.metric, p);
    double worst = 0.0;
    for (const cplx& v : mp.g) worst = std::max(worst, std::abs(v.imag()) / mp.scale);
    leak.feed(worst, p);
  }
  if (variant != SliceVariant::lorentzian) {
    r.checks.push_back(residual_check("v_formula_residual", vres, rtol));
    r.checks.push_back(residual_check("alpha_residual", ares, rtol));
    r.checks.push_back(residual_check("bfp_residual", bres, rtol));
  }
  r.checks.push_back(residual_check("reality_leak", leak, 1e-10));

  // Signature by eigenvalue signs, constant across the sample.
  std::array<int, 2> expected_sig{4, 0};
  if (variant == SliceVariant::neutral_1 || variant == SliceVariant::neutral_2)
    expected_sig = {2, 2};
  if (variant == SliceVariant::lorentzian) expected_sig = {3, 1};
  int mismatches = 0;
  for (const Point& p : pts) {
    const MetricPoint mp = metric_at(sr.metric, p);
    std::array<double, 16> gr{};
    for (size_t k = 0; k < 16; ++k) gr[k] = mp.g[k].real();
    if (sym4_signature(gr, 1e-10 * mp.scale) != expected_sig) ++mismatches;
  }
  r.checks.push_back(
      Check{"signature", static_cast<double>(mismatches), 0.0, mismatches == 0, {}});

  // The Killing vector d/dz survives every slice; record its invariant sign.
  std::string invariant_sign = "n/a";
  if (variant != SliceVariant::lorentzian) {
    const KillingField kz{{Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0),
                           Expr::constant(1.0)}};
    const KillingReport kr = classify_killing(sr.metric, kz, pts);
    r.kappa = kr.kappa;
    const bool nonnull = kr.classification == KillingClass::nonnull;
    r.checks.push_back(
        Check{"killing_class:d_z", nonnull ? 0.0 : 1.0, 0.0, nonnull, {}});
    invariant_sign = kr.inv_plus.real() > 0 ? "positive" : "negative";
  } else {
    // The chain back to the potential form reproduces the slice metric.
    std::array<Expr, 4> chain;
    const auto inner = map_lorentz_to_simple_v();
    const auto outer = map_simple_v_to_u_form(u.lambda, 1.0);
    for (int c = 0; c < 4; ++c) chain[static_cast<size_t>(c)] = outer[static_cast<size_t>(c)].substitute(inner);
    const MetricField mu = build_u_metric(u);
    const double pb = pullback_compare(sr.metric, chain, mu, pts);
    r.checks.push_back(Check{"chain_pullback", pb, rtol, pb <= rtol, {}});
  }

  r.pass = true;
  for (const Check& c : r.checks) r.pass = r.pass && c.pass;

  Json rep = verify_report(r, "slice");
  rep.set("variant", Json::string(slice_variant_name(variant)));
  rep.set("signature", Json::string(signature_string(expected_sig)));
  rep.set("invariant_sign", Json::string(invariant_sign));
  rep.set("slice_lambda", Json::number(sr.slice_lambda.real()));
  rep.set("einstein_lambda", Json::number(sr.einstein_lambda.real()));
  return emit(cfg, std::move(rep), r.pass, out);
}

GridSpec parse_grid(const RunConfig& cfg) {
  GridSpec spec;
  double vals[7];
  std::stringstream ss(cfg.grid);
  std::string tok;
  int n = 0;
  while (std::getline(ss, tok, ',') && n < 7) {
    if (!parse_double(tok, &vals[n])) throw ConfigError("bad --grid entry \"" + tok + "\"");
    ++n;
  }
  if (n != 7) throw ConfigError("--grid needs n,t0,t1,x0,x1,y0,y1");
  spec.n = static_cast<int>(vals[0]);
  spec.t_range = {vals[1], vals[2]};
  spec.x_range = {vals[3], vals[4]};
  spec.y_range = {vals[5], vals[6]};

  const Expr bc = parse_expr(cfg.bc, {"t", "x", "y", "z"});
  Params params;
  params["Lambda"] = cfg.lambda ? *cfg.lambda : 3.0;
  spec.bc = [bc, params](double t, double x, double y) {
    return eval_value(bc, Point{cplx(t), cplx(x), cplx(y), cplx(0.0)}, params).real();
  };
  spec.validate();
  return spec;
}

int run_solve_bfp(const RunConfig& cfg, std::ostream& out) {
  const GridSpec spec = parse_grid(cfg);
  const double lambda = cfg.lambda ? *cfg.lambda : 3.0;

  const GridSolution sol = solve_bfp(spec, BfpInit::bc_harmonic_extension, true, cfg.grid_tol,
                                     cfg.max_iters);
  const GridMetricReport gm = grid_to_metric_report(sol, lambda);

  const std::string csv_path = cfg.grid_out.empty() ? "bfp_grid.csv" : cfg.grid_out;
  {
    std::ostringstream csv;
    write_grid_csv(sol, csv);
    write_text_file(csv_path, csv.str());
  }

  VerifyResult r;
  r.family = "bfp_grid";
  r.params = {{"Lambda", lambda}};
  r.points_evaluated = gm.interior_nodes;
  r.checks.push_back(Check{"residual_norm", sol.residual_norm, cfg.grid_tol,
                           sol.residual_norm <= cfg.grid_tol, {}});
  r.checks.push_back(Check{"newton_iters", static_cast<double>(sol.newton_iters),
                           static_cast<double>(cfg.max_iters),
                           sol.newton_iters <= cfg.max_iters, {}});
  r.pass = true;
  for (const Check& c : r.checks) r.pass = r.pass && c.pass;

  Json rep = verify_report(r, "solve-bfp");
  // Discretization-limited figures: reported, not gated. They shrink at
  // O(h^2) on solutions that stay smooth up to the boundary.
  Json diag = Json::object();
  diag.set("grid_einstein_residual", Json::number(gm.max_einstein_residual));
  diag.set("grid_scalar_deviation", Json::number(gm.max_scalar_deviation));
  diag.set("alpha_closure", Json::number(gm.closure_max));
  diag.set("alpha_max", Json::number(gm.alpha_max));
  diag.set("v_min_abs", Json::number(gm.v_min_abs));
  rep.set("diagnostics", std::move(diag));
  Json grid = Json::object();
  grid.set("n", Json::integer(spec.n));
  Json gbox = Json::array();
  gbox.push(Json::number(spec.t_range[0]));
  gbox.push(Json::number(spec.t_range[1]));
  gbox.push(Json::number(spec.x_range[0]));
  gbox.push(Json::number(spec.x_range[1]));
  gbox.push(Json::number(spec.y_range[0]));
  gbox.push(Json::number(spec.y_range[1]));
  grid.set("box", std::move(gbox));
  grid.set("csv", Json::string(csv_path));
  grid.set("h", Json::number(gm.h));
  rep.set("grid", std::move(grid));
  return emit(cfg, std::move(rep), r.pass, out);
}

int run_catalog(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.out.empty()) {
    Json o = Json::object();
    o.set("schema", Json::integer(1));
    o.set("command", Json::string("catalog"));
    Json fams = Json::array();
    for (const auto& id : catalog()) fams.push(Json::string(id));
    o.set("families", std::move(fams));
    o.set("pass", Json::boolean(true));
    write_text_file(cfg.out, o.dump());
    out << "PASS -> " << cfg.out << "\n";
    return 0;
  }
  for (const auto& id : catalog()) out << id << "\n";
  return 0;
}

}  // namespace

void RunConfig::validate() const {
  static const char* kCommands[] = {"verify", "pipeline", "slice", "solve-bfp", "catalog"};
  bool known = false;
  for (const char* c : kCommands) known = known || command == c;
  if (!known) throw ConfigError("unknown command \"" + command + "\"");
  if (points < 1) throw ConfigError("--points must be >= 1");
  if (tol < 0.0) throw ConfigError("--tol must be positive");
  if (!(grid_tol > 0.0)) throw ConfigError("grid tolerance must be positive");
  if (command == "verify" && family.empty() == file.empty())
    throw ConfigError("verify needs exactly one of --family or --file");
  if ((command == "pipeline" || command == "slice") && family.empty())
    throw ConfigError(command + " needs --family");
  if (command == "slice" && variant.empty()) throw ConfigError("slice needs --variant");
  if (command == "solve-bfp" && grid.empty()) throw ConfigError("solve-bfp needs --grid");
}

int worker_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(std::min<long>(v, hw));
    return 1;
  }
  return static_cast<int>(hw);
}

Box parse_box_flag(const std::string& text) {
  Box box{};
  std::stringstream ss(text);
  std::string range;
  int d = 0;
  while (std::getline(ss, range, ',') && d < 4) {
    const auto colon = range.find(':');
    if (colon == std::string::npos) throw ConfigError("--box ranges look like lo:hi");
    double lo = 0.0, hi = 0.0;
    if (!parse_double(range.substr(0, colon), &lo) ||
        !parse_double(range.substr(colon + 1), &hi))
      throw ConfigError("bad --box range \"" + range + "\"");
    box[static_cast<size_t>(d)] = {lo, hi};
    ++d;
  }
  if (d != 4) throw ConfigError("--box needs four lo:hi ranges");
  return box;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  }
  try {
    if (cfg.command == "verify") return run_verify(cfg, out);
    if (cfg.command == "pipeline") return run_pipeline(cfg, out);
    if (cfg.command == "slice") return run_slice(cfg, out);
    if (cfg.command == "solve-bfp") return run_solve_bfp(cfg, out);
    if (cfg.command == "catalog") return run_catalog(cfg, out);
    err << "unknown command\n";
    return 2;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    const std::string family = cfg.family.empty() ? cfg.file : cfg.family;
    const int code = emit(cfg, error_report(cfg.command, family, e.what()), false, out);
    err << e.what() << "\n";
    return code;
  }
}

}  // namespace hh
