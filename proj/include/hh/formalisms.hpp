#pragma once

#include <vector>

#include "hh/geometry.hpp"

namespace hh {

// Standard charts. Extra singular loci (family-specific denominators,
// logarithm arguments) are appended to the built-in ones.
Chart w_chart(std::vector<Expr> extra_loci = {});         // (phi, eta, t, w)
Chart p_chart(std::vector<Expr> extra_loci = {});         // (phi, z, rho, v)
Chart sigma_chart(std::vector<Expr> extra_loci = {});     // (phi, xi, rho, v)
Chart u_chart(std::vector<Expr> extra_loci = {});         // (T, X, Y, Z)
Chart slice_chart(std::vector<Expr> extra_loci = {});     // (t, x, y, z), real
Chart lorentz_chart(std::vector<Expr> extra_loci = {});   // (x, y, z, t), real
Chart null_conformal_chart(std::vector<Expr> extra_loci = {});  // (xi, zeta, u, v)

// Key-function data on (phi, eta, *, w). The same positional layout serves
// the rescaled frame (phi, eta, rho, v) used by the Legendre step.
struct WData {
  Expr W;
  cplx tau{1.0};
  cplx lambda{3.0};
  std::vector<Expr> extra_loci;
};

struct PData {
  Expr P;  // on (phi, z, *, v)
  cplx tau{1.0};
  cplx lambda{3.0};
  std::vector<Expr> extra_loci;
};

struct SigmaData {
  Expr Sigma;  // on (phi, xi, *, v)
  cplx tau{1.0};
  cplx lambda{3.0};
  std::vector<Expr> extra_loci;
};

struct UData {
  Expr U;                    // on (T, X, Y)
  std::array<Expr, 4> alpha; // 1-form components; the Z component must vanish
  cplx lambda{3.0};
  Expr V;                    // derived: (3/2)(T U_T - 2)/Lambda
  std::vector<Expr> extra_loci;
};

UData make_u_data(Expr U, std::array<Expr, 4> alpha, cplx lambda,
                  std::vector<Expr> extra_loci = {});

// |phi (W_ee W_pp - W_ep^2) + 2 (W_e W_ep - W_p W_ee) + W_we / tau
//  - Lambda/(6 tau^2) W_pp| at the point.
double heavenly_residual(const WData& w, const Point& p);

MetricField build_w_metric(const WData& w);

// |P_pp P_zz - P_zp^2 + phi P_pp - P_p + P_zv|.
double p_residual(const PData& p, const Point& pt);

struct LegendreResult {
  cplx eta;                  // root of W_eta(phi, eta, v) = z
  int iterations = 0;
  double inversion_error = 0.0;
  cplx P;
  std::array<cplx, 3> dP;    // d/d(phi, z, v)
  std::array<cplx, 6> ddP;   // packed upper triangle: pp, pz, pv, zz, zv, vv
};

// Numeric Legendre step: Newton inversion of W_eta = z, then P and its
// derivatives from the closed-form dictionary. Throws DegenerateLegendre
// when |W_etaeta| < 1e-10 at the iterate, NoConvergence past 50 steps.
LegendreResult legendre_to_p(const WData& w, cplx phi, cplx z, cplx v, cplx eta_seed = cplx(0.0));

struct SigmaResidualReport {
  double residual;     // |Sigma_xiv + Sigma_xi Sigma_phiphi|
  cplx sigma_phixi;
  cplx omega_xi;       // Omega = 2 Sigma - phi Sigma_phi
};

SigmaResidualReport sigma_residual(const SigmaData& s, const Point& p);

MetricField build_sigma_metric(const SigmaData& s);

struct SigmaToUResult {
  UData u;
  Expr sigma_on_u;   // Sigma pulled to the (T,X,Y,Z) chart
  Expr constraint;   // Sigma_TT - U_X - U_Y
};

SigmaToUResult sigma_to_u(const SigmaData& s);

MetricField build_u_metric(const UData& u);

struct AlphaResidualReport {
  double residual;  // max component deviation of the two-form identity
  double bfp;       // complex BFP residual at the same point
};

AlphaResidualReport alpha_residual(const UData& u, const Point& p);

enum class BfpVariant { complex_toda, neutral_upper, neutral_lower, euclidean };

double bfp_residual(const Expr& U, BfpVariant variant, const Chart& chart, const Point& p,
                    const Params& params);

// Residual of the implicit constraint picking out the second conformally
// flat potential family: |6 a e^U - (d_Y - d_X) (T^2 (T U_T - 2)^2)^-1|.
// A residual operator only; nothing here solves it.
double confflat_constraint_residual(const Expr& U, cplx a, const Chart& chart, const Point& p,
                                    const Params& params);

enum class SliceVariant { neutral_1, neutral_2, euclidean, lorentzian };

const char* slice_variant_name(SliceVariant v);

Box default_slice_box();

struct SliceSpec {
  SliceVariant variant = SliceVariant::euclidean;
  // When set, U/alpha are taken as already-real data on the target chart and
  // lambda as the real-side constant; no coordinate substitution is applied.
  bool payload_is_real = false;
  Box box = default_slice_box();  // sampling region for the reality check
  int reality_samples = 20;
};

struct SliceResult {
  MetricField metric;       // real-tagged chart
  SliceVariant variant;
  cplx slice_lambda;        // constant in the real-side formulas
  cplx einstein_lambda;     // scalar curvature satisfies R = -4 einstein_lambda
  Expr U;                   // payload on the real chart (invalid for lorentzian)
  std::array<Expr, 4> alpha;
  Expr V;                   // variant V formula (invalid for lorentzian)
};

// Real slices of the U-form metric. Checks reality by sampling; the
// lorentzian variant additionally requires U and alpha to vanish.
SliceResult slice_transform(const UData& u, const SliceSpec& spec);

// Residual of the variant's V formula against the V read back from the
// constructed metric components.
double slice_v_residual(const SliceResult& s, const Point& p);

// Residual of the variant's alpha equation (two-form identity).
double slice_alpha_residual(const SliceResult& s, const Point& p);

// Variant BFP residual for the slice payload.
double slice_bfp_residual(const SliceResult& s, const Point& p);

// Max componentwise deviation between mA and the pullback of mB under the
// coordinate map (four expressions on mA's chart), relative to mA's scale.
double pullback_compare(const MetricField& mA, const std::array<Expr, 4>& map,
                        const MetricField& mB, const std::vector<Point>& points);

}  // namespace hh
