#include "hh/curvature.hpp"

#include <cmath>
#include <thread>

#include "hh/errors.hpp"
#include "hh/formalisms.hpp"

namespace hh {

namespace {

int levi4(int a, int b, int c, int d) {
  const int idx[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  return sign;
}

inline size_t t4(int a, int b, int c, int d) {
  return static_cast<size_t>(((a * 4 + b) * 4 + c) * 4 + d);
}

double max_abs(const std::array<cplx, 256>& t) {
  double m = 0.0;
  for (const cplx& v : t) m = std::max(m, std::abs(v));
  return m;
}

// Everything up to the Weyl tensor plus its Hodge dual on the first pair.
// `star_ok` is false when the Weyl tensor vanishes to working precision and
// the dual was not needed.
struct CoreCurvature {
  CurvatureBundle bundle;  // sd/asd halves left empty
  std::array<cplx, 256> star{};
  bool star_ok = false;
};

CoreCurvature curvature_core(const MetricPoint& mp, int orientation) {
  CoreCurvature core;
  CurvatureBundle& out = core.bundle;
  out.scale = mp.scale;
  out.gamma = christoffel_from(mp);

  // d_e g^{ad} = -g^{af} (d_e g_{fh}) g^{hd}
  std::array<cplx, 64> dginv{};
  for (int e = 0; e < 4; ++e)
    for (int a = 0; a < 4; ++a)
      for (int d = 0; d < 4; ++d) {
        cplx s(0.0);
        for (int f = 0; f < 4; ++f)
          for (int h = 0; h < 4; ++h)
            s += mp.ginv[static_cast<size_t>(a * 4 + f)] * mp.d(e, f, h) *
                 mp.ginv[static_cast<size_t>(h * 4 + d)];
        dginv[static_cast<size_t>(e * 16 + a * 4 + d)] = -s;
      }

  std::array<cplx, 256> dgamma{};
  for (int e = 0; e < 4; ++e)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = b; c < 4; ++c) {
          cplx s(0.0);
          for (int d = 0; d < 4; ++d) {
            s += dginv[static_cast<size_t>(e * 16 + a * 4 + d)] *
                 (mp.d(b, d, c) + mp.d(c, b, d) - mp.d(d, b, c));
            s += mp.ginv[static_cast<size_t>(a * 4 + d)] *
                 (mp.dd(e, b, d, c) + mp.dd(e, c, b, d) - mp.dd(e, d, b, c));
          }
          s *= 0.5;
          dgamma[t4(e, a, b, c)] = s;
          dgamma[t4(e, a, c, b)] = s;
        }

  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          cplx s = dgamma[t4(d, a, c, b)] - dgamma[t4(c, a, d, b)];
          for (int e = 0; e < 4; ++e)
            s += out.G(a, d, e) * out.G(e, c, b) - out.G(a, c, e) * out.G(e, d, b);
          out.riemann[t4(a, b, c, d)] = s;
        }

  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          cplx s(0.0);
          for (int e = 0; e < 4; ++e)
            s += mp.g[static_cast<size_t>(a * 4 + e)] * out.riemann[t4(e, b, c, d)];
          out.riemann_low[t4(a, b, c, d)] = s;
        }

  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      cplx s(0.0);
      for (int a = 0; a < 4; ++a) s += out.riemann[t4(a, b, a, d)];
      out.ricci[static_cast<size_t>(b * 4 + d)] = s;
    }

  out.scalar = cplx(0.0);
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d)
      out.scalar +=
          mp.ginv[static_cast<size_t>(b * 4 + d)] * out.ricci[static_cast<size_t>(b * 4 + d)];

  const auto g = [&](int a, int b) { return mp.g[static_cast<size_t>(a * 4 + b)]; };
  const auto ric = [&](int a, int b) { return out.ricci[static_cast<size_t>(a * 4 + b)]; };
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          cplx s = out.riemann_low[t4(a, b, c, d)];
          s -= 0.5 * (g(a, c) * ric(b, d) - g(a, d) * ric(b, c) - g(b, c) * ric(a, d) +
                      g(b, d) * ric(a, c));
          s += out.scalar / 6.0 * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
          out.weyl[t4(a, b, c, d)] = s;
        }

  double einstein = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      einstein = std::max(einstein, std::abs(ric(a, b) - out.scalar / 4.0 * g(a, b)));
  out.einstein_residual = einstein / out.scale;

  const double weyl_max = max_abs(out.weyl);
  out.weyl_norm = weyl_max / out.scale;
  if (weyl_max < 1e-12 * out.scale) {
    // Conformally flat to working precision; both halves vanish regardless of
    // the volume-density branch, so the star is not needed.
    core.star_ok = false;
    return core;
  }

  const cplx root = sqrt_det_principal(mp.det);
  std::array<cplx, 256> eps2{};  // eps_ab^{mn}
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          cplx s(0.0);
          for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q) {
              const int sgn = levi4(a, b, p, q);
              if (!sgn) continue;
              s += static_cast<double>(sgn) * mp.ginv[static_cast<size_t>(p * 4 + m)] *
                   mp.ginv[static_cast<size_t>(q * 4 + n)];
            }
          eps2[t4(a, b, m, n)] = static_cast<double>(orientation) * root * s;
        }
    }

  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          cplx s(0.0);
          for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) s += eps2[t4(a, b, m, n)] * out.weyl[t4(m, n, c, d)];
          core.star[t4(a, b, c, d)] = 0.5 * s;
        }
  core.star_ok = true;
  return core;
}

DualityConvention calibrate_duality() {
  // Reference ASD background: the first exponential solution family of the
  // crucial equation; exactly one Weyl half must vanish on it.
  const Expr phi = Expr::coordinate(0);
  const Expr xi = Expr::coordinate(1);
  const Expr v = Expr::coordinate(3);
  SigmaData s;
  s.Sigma = Expr::constant(-0.5) * phi * phi + exp(v) * (xi * phi + xi * xi);
  s.tau = 1.0;
  s.lambda = 3.0;
  const MetricField m = build_sigma_metric(s);
  const Point p = real_point(1.1, 0.7, 0.3, 0.2);

  const CoreCurvature core = curvature_core(metric_at(m, p), m.orientation);
  if (!core.star_ok)
    throw CalibrationError("reference metric is conformally flat; cannot pick a convention");

  double plus_norm = 0.0, minus_norm = 0.0;
  for (size_t k = 0; k < 256; ++k) {
    plus_norm = std::max(plus_norm, std::abs(0.5 * (core.bundle.weyl[k] + core.star[k])));
    minus_norm = std::max(minus_norm, std::abs(0.5 * (core.bundle.weyl[k] - core.star[k])));
  }
  plus_norm /= core.bundle.scale;
  minus_norm /= core.bundle.scale;

  if (plus_norm < 1e-8 && minus_norm > 1e-3) return DualityConvention{true};
  if (minus_norm < 1e-8 && plus_norm > 1e-3) return DualityConvention{false};
  throw CalibrationError("duality halves on the reference ASD metric: plus " +
                         std::to_string(plus_norm) + ", minus " + std::to_string(minus_norm));
}

}  // namespace

cplx sqrt_det_principal(cplx det) {
  const double a = std::abs(det);
  if (a == 0.0) throw DegenerateMetric("vanishing determinant in volume density");
  if (det.real() < 0.0 && std::abs(det.imag()) < 1e-12 * a)
    throw BranchAmbiguity("det(g) within 1e-12 of the negative real axis");
  return std::sqrt(det);
}

std::array<cplx, 64> christoffel_from(const MetricPoint& mp) {
  std::array<cplx, 64> gamma{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = b; c < 4; ++c) {
        cplx s(0.0);
        for (int d = 0; d < 4; ++d)
          s += mp.ginv[static_cast<size_t>(a * 4 + d)] *
               (mp.d(b, d, c) + mp.d(c, b, d) - mp.d(d, b, c));
        s *= 0.5;
        gamma[static_cast<size_t>(a * 16 + b * 4 + c)] = s;
        gamma[static_cast<size_t>(a * 16 + c * 4 + b)] = s;
      }
  return gamma;
}

std::array<cplx, 64> christoffel(const MetricField& m, const Point& point) {
  return christoffel_from(metric_at(m, point));
}

const DualityConvention& duality_convention() {
  static const DualityConvention conv = calibrate_duality();
  return conv;
}

CurvatureBundle curvature_from_derivatives(const MetricPoint& mp, int orientation) {
  CoreCurvature core = curvature_core(mp, orientation);
  CurvatureBundle& out = core.bundle;
  if (!core.star_ok) {
    out.weyl_sd.fill(cplx(0.0));
    out.weyl_asd.fill(cplx(0.0));
    const double n = max_abs(out.weyl) / out.scale;
    out.sd_weyl_norm = n;
    out.asd_weyl_norm = n;
    return out;
  }
  const bool sd_plus = duality_convention().sd_is_plus;
  for (size_t k = 0; k < 256; ++k) {
    const cplx plus = 0.5 * (out.weyl[k] + core.star[k]);
    const cplx minus = 0.5 * (out.weyl[k] - core.star[k]);
    out.weyl_sd[k] = sd_plus ? plus : minus;
    out.weyl_asd[k] = sd_plus ? minus : plus;
  }
  out.sd_weyl_norm = max_abs(out.weyl_sd) / out.scale;
  out.asd_weyl_norm = max_abs(out.weyl_asd) / out.scale;
  return out;
}

CurvatureBundle curvature_bundle(const MetricField& m, const Point& point) {
  return curvature_from_derivatives(metric_at(m, point), m.orientation);
}

CMat4 hodge_star_2form(const CMat4& F, const MetricPoint& mp, int orientation) {
  const cplx root = sqrt_det_principal(mp.det);
  CMat4 out{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      cplx s(0.0);
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
          const int sgn = levi4(a, b, p, q);
          if (!sgn) continue;
          cplx Fup(0.0);
          for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
              Fup += mp.ginv[static_cast<size_t>(p * 4 + m)] *
                     mp.ginv[static_cast<size_t>(q * 4 + n)] * F[static_cast<size_t>(m * 4 + n)];
          s += static_cast<double>(sgn) * Fup;
        }
      out[static_cast<size_t>(a * 4 + b)] = 0.5 * static_cast<double>(orientation) * root * s;
    }
  return out;
}

CertificateStats einstein_certificate(const MetricField& m, cplx lambda,
                                      const std::vector<Point>& points, int threads) {
  if (points.empty()) throw Error("einstein_certificate needs at least one point");
  const size_t n = points.size();
  struct Row {
    double einstein, dev, weyl, sd, asd;
  };
  std::vector<Row> rows(n);
  std::vector<std::exception_ptr> errors(n);

  const auto work = [&](size_t i) {
    try {
      const CurvatureBundle b = curvature_bundle(m, points[i]);
      const double dev = std::abs(lambda) > 0.0
                             ? std::abs(b.scalar + 4.0 * lambda) / std::abs(lambda)
                             : std::abs(b.scalar);
      rows[i] = Row{b.einstein_residual, dev, b.weyl_norm, b.sd_weyl_norm, b.asd_weyl_norm};
    } catch (const Error& e) {
      const Point& p = points[i];
      errors[i] = std::make_exception_ptr(
          Error(std::string(e.what()) + " at point (" + std::to_string(p[0].real()) + ", " +
                std::to_string(p[1].real()) + ", " + std::to_string(p[2].real()) + ", " +
                std::to_string(p[3].real()) + ")"));
    }
  };

  if (threads <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) work(i);
  } else {
    const size_t nt = std::min<size_t>(static_cast<size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (size_t t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (size_t i = t; i < n; i += nt) work(i);
      });
    for (auto& th : pool) th.join();
  }

  for (size_t i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);

  CertificateStats st;
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].einstein >= st.max_einstein_residual) {
      st.max_einstein_residual = rows[i].einstein;
      st.worst_point = points[i];
    }
    st.max_scalar_deviation = std::max(st.max_scalar_deviation, rows[i].dev);
    st.max_weyl = std::max(st.max_weyl, rows[i].weyl);
    st.max_sd_weyl = std::max(st.max_sd_weyl, rows[i].sd);
    st.max_asd_weyl = std::max(st.max_asd_weyl, rows[i].asd);
    ++st.points_evaluated;
  }
  return st;
}

}  // namespace hh
