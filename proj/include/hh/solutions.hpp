#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hh/formalisms.hpp"
#include "hh/killing.hpp"

namespace hh {

enum class Formalism { W, Sigma, U, explicit_metric };

const char* formalism_name(Formalism f);

struct KillingEntry {
  std::string name;
  KillingField field;
  std::optional<KillingClass> expected_class;  // unset: residual check only
  Expr expected_inv_plus;                      // undotted invariant formula, optional
};

struct ExpectedBlock {
  bool einstein = true;
  cplx lambda_eff_factor{1.0};  // scalar curvature satisfies R = -4 * factor * Lambda
  bool sd_weyl_zero = false;
  bool full_weyl_zero = false;
  bool asd_weyl_nonzero = false;
  std::optional<std::array<int, 2>> signature;  // (#positive, #negative)
  double tol_einstein = 1e-8;
  double tol_weyl = 1e-8;
  double tol_residual = 1e-10;
  double tol_killing = 1e-9;
  std::vector<KillingEntry> killing;
  std::vector<SliceVariant> slices;  // real slices known to work at defaults
};

struct SolutionRecord {
  std::string id;
  Formalism formalism = Formalism::explicit_metric;
  Params params;       // resolved bindings
  Box box{};           // default admissible sample box
  ExpectedBlock expected;
  bool payload_is_real = false;  // U payload already on the real slice chart
  SliceVariant real_variant = SliceVariant::euclidean;  // for real payloads
  std::string notes;   // normalization choices, derived payload provenance
  std::vector<std::pair<std::string, std::string>> payload_echo;  // printable payload
};

// Numeric and expression-slot overrides for instantiate().
struct Overrides {
  Params params;
  std::vector<std::pair<std::string, std::string>> slots;  // name -> grammar text
};

struct Instantiation {
  SolutionRecord record;
  MetricField metric;
  std::optional<WData> w;
  std::optional<SigmaData> sigma;
  std::optional<UData> u;
};

// Deterministic, ordered list of family ids.
std::vector<std::string> catalog();

Instantiation instantiate(const std::string& id, const Overrides& ov = {});

// Documented chart equivalences between the constant-curvature families.
std::array<Expr, 4> map_simple_v_to_w0(cplx lambda, cplx tau);      // (xi,zeta,u,v) -> (phi,eta,t,w)
std::array<Expr, 4> map_simple_v_to_u_form(cplx lambda, cplx tau);  // (xi,zeta,u,v) -> (T,X,Y,Z)
std::array<Expr, 4> map_w0_to_u_form(cplx lambda, cplx tau);        // (phi,eta,t,w) -> (T,X,Y,Z)
std::array<Expr, 4> map_lorentz_to_simple_v();                      // (x,y,z,t) -> (xi,zeta,u,v)
std::array<Expr, 4> map_sigma_to_u(cplx tau);                       // (phi,xi,rho,v) -> (T,X,Y,Z)

struct Check {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::optional<Point> worst_point;
};

struct VerifyResult {
  std::string family;
  Params params;
  int points_evaluated = 0;
  std::vector<Check> checks;
  bool pass = false;
  double kappa = 0.0;  // recorded when Killing invariants were evaluated
};

// Runs the record's expected block: residual operators, curvature
// certificate, Killing residuals/classifications/invariants, reality and
// signature where applicable. tol_override > 0 replaces every default.
VerifyResult verify_family(const std::string& id, int points, double tol_override = 0.0,
                           const Overrides& ov = {}, int threads = 1);

VerifyResult verify_instantiation(const Instantiation& inst, int points,
                                  double tol_override = 0.0, int threads = 1);

}  // namespace hh
