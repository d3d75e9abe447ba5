#pragma once

#include <vector>

#include "hh/geometry.hpp"

namespace hh {

// Pointwise curvature data. Sign convention: the Ricci contraction is chosen
// so constant-curvature backgrounds built from the catalog report R = -4 Lambda.
struct CurvatureBundle {
  std::array<cplx, 64> gamma;          // gamma[a*16 + b*4 + c] = Gamma^a_bc
  std::array<cplx, 256> riemann;       // R^a_bcd at ((a*4+b)*4+c)*4+d
  std::array<cplx, 256> riemann_low;   // R_abcd
  std::array<cplx, 16> ricci;
  cplx scalar{};
  std::array<cplx, 256> weyl;          // fully covariant C_abcd
  std::array<cplx, 256> weyl_sd;       // designated SD half (vanishes on ASD spaces)
  std::array<cplx, 256> weyl_asd;
  double scale = 0.0;
  double einstein_residual = 0.0;      // max |Ric - (R/4) g| / scale
  double weyl_norm = 0.0;              // max |C_abcd| / scale
  double sd_weyl_norm = 0.0;           // max |weyl_sd| / scale
  double asd_weyl_norm = 0.0;

  cplx G(int a, int b, int c) const { return gamma[static_cast<size_t>(a * 16 + b * 4 + c)]; }
  cplx R(int a, int b, int c, int d) const {
    return riemann[static_cast<size_t>(((a * 4 + b) * 4 + c) * 4 + d)];
  }
  cplx Rlow(int a, int b, int c, int d) const {
    return riemann_low[static_cast<size_t>(((a * 4 + b) * 4 + c) * 4 + d)];
  }
  cplx C(int a, int b, int c, int d) const {
    return weyl[static_cast<size_t>(((a * 4 + b) * 4 + c) * 4 + d)];
  }
};

std::array<cplx, 64> christoffel(const MetricField& m, const Point& point);
std::array<cplx, 64> christoffel_from(const MetricPoint& mp);

CurvatureBundle curvature_bundle(const MetricField& m, const Point& point);

// Same computation from precomputed metric derivatives; lets grid pipelines
// with finite-difference derivatives share the tensor algebra.
CurvatureBundle curvature_from_derivatives(const MetricPoint& mp, int orientation);

// Principal branch of sqrt(det g); throws BranchAmbiguity when det is within
// 1e-12 (relative) of the negative real axis.
cplx sqrt_det_principal(cplx det);

// Hodge dual of an antisymmetric two-form on the first index pair.
CMat4 hodge_star_2form(const CMat4& F, const MetricPoint& mp, int orientation);

// Which duality projector half is the one that vanishes on ASD backgrounds.
// Fixed once per process by evaluating a reference ASD metric and asserting
// exactly one half vanishes there.
struct DualityConvention {
  bool sd_is_plus;  // true when the SD half is (C + *C)/2
};

const DualityConvention& duality_convention();

struct CertificateStats {
  int points_evaluated = 0;
  double max_einstein_residual = 0.0;
  double max_scalar_deviation = 0.0;  // max |R + 4 Lambda| / |Lambda|
  double max_weyl = 0.0;
  double max_sd_weyl = 0.0;
  double max_asd_weyl = 0.0;
  Point worst_point{};                // argmax of the Einstein residual
};

// Point evaluations may fan out across `threads` workers; aggregation is an
// index-ordered reduction, so the result does not depend on scheduling.
CertificateStats einstein_certificate(const MetricField& m, cplx lambda,
                                      const std::vector<Point>& points, int threads = 1);

}  // namespace hh
