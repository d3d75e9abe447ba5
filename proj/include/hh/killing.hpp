#pragma once

#include <utility>
#include <vector>

#include "hh/curvature.hpp"

namespace hh {

// Contravariant vector field on a chart.
struct KillingField {
  std::array<Expr, 4> components;
};

enum class KillingClass { null_vector, nonnull, not_killing };

const char* killing_class_name(KillingClass c);

// max |nabla_a K_b + nabla_b K_a| / scale.
double killing_residual(const MetricField& m, const KillingField& K, const Point& p);

// Duality-half invariants of nabla K for a genuine Killing field:
// (undotted, dotted) = kappa * (F_sd . F_sd, F_asd . F_asd).
// Requires killing_residual < 1e-8 at the point.
std::pair<cplx, cplx> l_invariants(const MetricField& m, const KillingField& K, const Point& p);

// The single spinor-to-tensor calibration constant. Fixed once per process
// from a reference metric with a known invariant, then cross-checked against
// an independent second anchor.
double kappa_calibration();

struct KillingReport {
  double killing_residual = 0.0;  // max over points
  cplx k_norm{};                  // K_a K^a at the first point
  cplx inv_plus{};                // undotted invariant at the first point
  cplx inv_minus{};
  KillingClass classification = KillingClass::not_killing;
  double kappa = 0.0;
};

// Null/nonnull classification over a point sample. Mixed signals (null norm
// with nonvanishing invariants or vice versa) raise TheoremViolation.
KillingReport classify_killing(const MetricField& m, const KillingField& K,
                               const std::vector<Point>& points);

}  // namespace hh
