#include "hh/bfp.hpp"

#include <cmath>
#include <ostream>

#include "hh/curvature.hpp"
#include "hh/errors.hpp"

extern "C" void dgbsv_(const int* n, const int* kl, const int* ku, const int* nrhs, double* ab,
                       const int* ldab, int* ipiv, double* b, const int* ldb, int* info);

namespace hh {

namespace {

constexpr int kDirectLimit = 4096;  // interior unknowns for the banded path

struct Interior {
  int n, m;  // grid points per axis, interior per axis
  size_t count() const { return static_cast<size_t>(m) * m * m; }
  size_t at(int i, int j, int k) const {  // i,j,k are grid indices in [1, n-2]
    return (static_cast<size_t>(i - 1) * m + (j - 1)) * static_cast<size_t>(m) + (k - 1);
  }
};

std::vector<double> residual_interior(const GridSpec& s, const std::vector<double>& U) {
  const Interior in{s.n, s.n - 2};
  const double wt = 1.0 / (s.ht() * s.ht());
  const double wx = 1.0 / (s.hx() * s.hx());
  const double wy = 1.0 / (s.hy() * s.hy());
  std::vector<double> F(in.count());
  for (int i = 1; i < s.n - 1; ++i)
    for (int j = 1; j < s.n - 1; ++j)
      for (int k = 1; k < s.n - 1; ++k) {
        const double ett = (std::exp(U[s.idx(i + 1, j, k)]) - 2.0 * std::exp(U[s.idx(i, j, k)]) +
                            std::exp(U[s.idx(i - 1, j, k)])) *
                           wt;
        const double uxx =
            (U[s.idx(i, j + 1, k)] - 2.0 * U[s.idx(i, j, k)] + U[s.idx(i, j - 1, k)]) * wx;
        const double uyy =
            (U[s.idx(i, j, k + 1)] - 2.0 * U[s.idx(i, j, k)] + U[s.idx(i, j, k - 1)]) * wy;
        F[in.at(i, j, k)] = ett + uxx + uyy;
      }
  return F;
}

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Jacobian-vector product; `expu` holds e^U at every grid node and `lin`
// switches to the plain Laplacian (harmonic-extension solve).
void apply_jacobian(const GridSpec& s, const std::vector<double>& expu, bool lin,
                    const std::vector<double>& v, std::vector<double>& out) {
  const Interior in{s.n, s.n - 2};
  const double wt = 1.0 / (s.ht() * s.ht());
  const double wx = 1.0 / (s.hx() * s.hx());
  const double wy = 1.0 / (s.hy() * s.hy());
  const auto val = [&](int i, int j, int k) -> double {
    if (i < 1 || i > s.n - 2 || j < 1 || j > s.n - 2 || k < 1 || k > s.n - 2) return 0.0;
    return v[in.at(i, j, k)];
  };
  for (int i = 1; i < s.n - 1; ++i)
    for (int j = 1; j < s.n - 1; ++j)
      for (int k = 1; k < s.n - 1; ++k) {
        const auto e = [&](int ii) { return lin ? 1.0 : expu[s.idx(ii, j, k)]; };
        double r = (e(i + 1) * val(i + 1, j, k) - 2.0 * e(i) * val(i, j, k) +
                    e(i - 1) * val(i - 1, j, k)) *
                   wt;
        r += (val(i, j + 1, k) - 2.0 * val(i, j, k) + val(i, j - 1, k)) * wx;
        r += (val(i, j, k + 1) - 2.0 * val(i, j, k) + val(i, j, k - 1)) * wy;
        out[in.at(i, j, k)] = r;
      }
}

void solve_banded(const GridSpec& s, const std::vector<double>& expu, bool lin,
                  std::vector<double>& rhs) {
  const Interior in{s.n, s.n - 2};
  const int N = static_cast<int>(in.count());
  const int bw = in.m * in.m;
  const int kl = bw, ku = bw;
  const int ldab = 2 * kl + ku + 1;
  std::vector<double> ab(static_cast<size_t>(ldab) * N, 0.0);
  const double wt = 1.0 / (s.ht() * s.ht());
  const double wx = 1.0 / (s.hx() * s.hx());
  const double wy = 1.0 / (s.hy() * s.hy());

  const auto put = [&](int row, int col, double v) {
    ab[static_cast<size_t>(col) * ldab + (kl + ku + row - col)] = v;
  };
  for (int i = 1; i < s.n - 1; ++i)
    for (int j = 1; j < s.n - 1; ++j)
      for (int k = 1; k < s.n - 1; ++k) {
        const int row = static_cast<int>(in.at(i, j, k));
        const auto e = [&](int ii) { return lin ? 1.0 : expu[s.idx(ii, j, k)]; };
        put(row, row, -2.0 * e(i) * wt - 2.0 * wx - 2.0 * wy);
        if (i > 1) put(row, static_cast<int>(in.at(i - 1, j, k)), e(i - 1) * wt);
        if (i < s.n - 2) put(row, static_cast<int>(in.at(i + 1, j, k)), e(i + 1) * wt);
        if (j > 1) put(row, static_cast<int>(in.at(i, j - 1, k)), wx);
        if (j < s.n - 2) put(row, static_cast<int>(in.at(i, j + 1, k)), wx);
        if (k > 1) put(row, static_cast<int>(in.at(i, j, k - 1)), wy);
        if (k < s.n - 2) put(row, static_cast<int>(in.at(i, j, k + 1)), wy);
      }

  std::vector<int> ipiv(static_cast<size_t>(N));
  const int nrhs = 1;
  int info = 0;
  dgbsv_(&N, &kl, &ku, &nrhs, ab.data(), &ldab, ipiv.data(), rhs.data(), &N, &info);
  if (info != 0) throw NoConvergence("banded solve failed, info " + std::to_string(info), 0.0);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void solve_bicgstab(const GridSpec& s, const std::vector<double>& expu, bool lin,
                    std::vector<double>& rhs) {
  const Interior in{s.n, s.n - 2};
  const size_t N = in.count();
  const double wt = 1.0 / (s.ht() * s.ht());
  const double wx = 1.0 / (s.hx() * s.hx());
  const double wy = 1.0 / (s.hy() * s.hy());

  std::vector<double> diag(N);
  for (int i = 1; i < s.n - 1; ++i)
    for (int j = 1; j < s.n - 1; ++j)
      for (int k = 1; k < s.n - 1; ++k)
        diag[in.at(i, j, k)] =
            -2.0 * (lin ? 1.0 : expu[s.idx(i, j, k)]) * wt - 2.0 * wx - 2.0 * wy;

  const std::vector<double> b = rhs;
  std::vector<double> x(N, 0.0), r = b, rhat = b, p(N, 0.0), v(N, 0.0), sres(N), t(N), phat(N),
                      shat(N);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    rhs.assign(N, 0.0);
    return;
  }
  const double target = 1e-13 * bnorm;
  const int maxit = 20000;
  for (int it = 0; it < maxit; ++it) {
    const double rho1 = dot(rhat, r);
    if (std::abs(rho1) < 1e-300) break;
    if (it == 0) {
      p = r;
    } else {
      const double beta = (rho1 / rho) * (alpha / omega);
      for (size_t q = 0; q < N; ++q) p[q] = r[q] + beta * (p[q] - omega * v[q]);
    }
    rho = rho1;
    for (size_t q = 0; q < N; ++q) phat[q] = p[q] / diag[q];
    apply_jacobian(s, expu, lin, phat, v);
    alpha = rho / dot(rhat, v);
    for (size_t q = 0; q < N; ++q) sres[q] = r[q] - alpha * v[q];
    if (std::sqrt(dot(sres, sres)) < target) {
      for (size_t q = 0; q < N; ++q) x[q] += alpha * phat[q];
      rhs = x;
      return;
    }
    for (size_t q = 0; q < N; ++q) shat[q] = sres[q] / diag[q];
    apply_jacobian(s, expu, lin, shat, t);
    omega = dot(t, sres) / dot(t, t);
    for (size_t q = 0; q < N; ++q) {
      x[q] += alpha * phat[q] + omega * shat[q];
      r[q] = sres[q] - omega * t[q];
    }
    if (std::sqrt(dot(r, r)) < target) {
      rhs = x;
      return;
    }
  }
  rhs = x;  // best effort; Newton's residual check decides
}

void solve_linear(const GridSpec& s, const std::vector<double>& expu, bool lin,
                  std::vector<double>& rhs) {
  const Interior in{s.n, s.n - 2};
  if (in.count() <= kDirectLimit)
    solve_banded(s, expu, lin, rhs);
  else
    solve_bicgstab(s, expu, lin, rhs);
}

std::vector<double> boundary_filled(const GridSpec& s) {
  std::vector<double> U(static_cast<size_t>(s.n) * s.n * s.n, 0.0);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k)
        if (i == 0 || i == s.n - 1 || j == 0 || j == s.n - 1 || k == 0 || k == s.n - 1)
          U[s.idx(i, j, k)] = s.bc(s.t(i), s.x(j), s.y(k));
  return U;
}

void add_interior(const GridSpec& s, std::vector<double>& U, const std::vector<double>& delta,
                  double step) {
  const Interior in{s.n, s.n - 2};
  for (int i = 1; i < s.n - 1; ++i)
    for (int j = 1; j < s.n - 1; ++j)
      for (int k = 1; k < s.n - 1; ++k) U[s.idx(i, j, k)] += step * delta[in.at(i, j, k)];
}

}  // namespace

void GridSpec::validate() const {
  if (n < 5) throw ConfigError("grid needs at least 5 points per axis");
  if (!(t_range[0] > 0.0)) throw ConfigError("grid must keep t0 > 0");
  if (!(t_range[1] > t_range[0]) || !(x_range[1] > x_range[0]) || !(y_range[1] > y_range[0]))
    throw ConfigError("grid box is empty");
  if (!bc) throw ConfigError("boundary data is not set");
}

std::vector<double> discrete_residual(const GridSolution& sol) {
  const GridSpec& s = sol.spec;
  const auto F = residual_interior(s, sol.U);
  const Interior in{s.n, s.n - 2};
  std::vector<double> full(static_cast<size_t>(s.n) * s.n * s.n, 0.0);
  for (int i = 1; i < s.n - 1; ++i)
    for (int j = 1; j < s.n - 1; ++j)
      for (int k = 1; k < s.n - 1; ++k) full[s.idx(i, j, k)] = F[in.at(i, j, k)];
  return full;
}

double discrete_residual_norm(const GridSolution& sol) {
  return max_norm(residual_interior(sol.spec, sol.U));
}

GridSolution solve_bfp(const GridSpec& spec, BfpInit init, bool damped, double tol,
                       int max_iters) {
  spec.validate();
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");

  GridSolution sol;
  sol.spec = spec;
  sol.U = boundary_filled(spec);

  if (init == BfpInit::bc_harmonic_extension) {
    // One linear solve of the Laplace part; D_tt acts on U itself here.
    const Interior in0{spec.n, spec.n - 2};
    std::vector<double> lap(in0.count());
    {
      const Interior in{spec.n, spec.n - 2};
      const double wt = 1.0 / (spec.ht() * spec.ht());
      const double wx = 1.0 / (spec.hx() * spec.hx());
      const double wy = 1.0 / (spec.hy() * spec.hy());
      for (int i = 1; i < spec.n - 1; ++i)
        for (int j = 1; j < spec.n - 1; ++j)
          for (int k = 1; k < spec.n - 1; ++k) {
            const double utt = (sol.U[spec.idx(i + 1, j, k)] - 2.0 * sol.U[spec.idx(i, j, k)] +
                                sol.U[spec.idx(i - 1, j, k)]) *
                               wt;
            const double uxx = (sol.U[spec.idx(i, j + 1, k)] - 2.0 * sol.U[spec.idx(i, j, k)] +
                                sol.U[spec.idx(i, j - 1, k)]) *
                               wx;
            const double uyy = (sol.U[spec.idx(i, j, k + 1)] - 2.0 * sol.U[spec.idx(i, j, k)] +
                                sol.U[spec.idx(i, j, k - 1)]) *
                               wy;
            lap[in.at(i, j, k)] = -(utt + uxx + uyy);
          }
    }
    solve_linear(spec, {}, /*lin=*/true, lap);
    add_interior(spec, sol.U, lap, 1.0);
  }

  double res = max_norm(residual_interior(spec, sol.U));
  double best = res;
  for (int iter = 0;; ++iter) {
    if (res < tol) {
      sol.newton_iters = iter;
      sol.residual_norm = res;
      return sol;
    }
    if (iter >= max_iters) {
      sol.residual_norm = res;
      throw NoConvergence("Newton hit max_iters with residual " + std::to_string(res), best);
    }

    auto F = residual_interior(spec, sol.U);
    for (double& f : F) f = -f;
    std::vector<double> expu(sol.U.size());
    for (size_t q = 0; q < sol.U.size(); ++q) expu[q] = std::exp(sol.U[q]);
    solve_linear(spec, expu, /*lin=*/false, F);

    // Damped step: strict residual descent.
    double step = 1.0;
    bool accepted = false;
    while (step >= std::ldexp(1.0, -20)) {
      std::vector<double> trial = sol.U;
      add_interior(spec, trial, F, step);
      const double trial_res = max_norm(residual_interior(spec, trial));
      if (trial_res < res || !damped) {
        sol.U = std::move(trial);
        res = trial_res;
        best = std::min(best, res);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      sol.residual_norm = res;
      throw NoConvergence("damping floor reached with residual " + std::to_string(res), best);
    }
  }
}

// ---------------------------------------------------------------------------
// Grid metric report
// ---------------------------------------------------------------------------

namespace {

using Field = std::vector<double>;

// First derivative along an axis: central interior, one-sided second order
// at the faces. axis: 0 = t (index i), 1 = x (j), 2 = y (k).
Field d_axis(const GridSpec& s, const Field& f, int axis) {
  Field out(f.size());
  const double h = axis == 0 ? s.ht() : axis == 1 ? s.hx() : s.hy();
  const auto at = [&](int i, int j, int k) { return f[s.idx(i, j, k)]; };
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k) {
        const int q = axis == 0 ? i : axis == 1 ? j : k;
        const auto shift = [&](int d) {
          return axis == 0 ? at(i + d, j, k) : axis == 1 ? at(i, j + d, k) : at(i, j, k + d);
        };
        double v;
        if (q == 0)
          v = (-3.0 * shift(0) + 4.0 * shift(1) - shift(2)) / (2.0 * h);
        else if (q == s.n - 1)
          v = (3.0 * shift(0) - 4.0 * shift(-1) + shift(-2)) / (2.0 * h);
        else
          v = (shift(1) - shift(-1)) / (2.0 * h);
        out[s.idx(i, j, k)] = v;
      }
  return out;
}

Field dd_axis(const GridSpec& s, const Field& f, int axis) {
  Field out(f.size());
  const double h = axis == 0 ? s.ht() : axis == 1 ? s.hx() : s.hy();
  const double h2 = h * h;
  const auto at = [&](int i, int j, int k) { return f[s.idx(i, j, k)]; };
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k) {
        const int q = axis == 0 ? i : axis == 1 ? j : k;
        const auto shift = [&](int d) {
          return axis == 0 ? at(i + d, j, k) : axis == 1 ? at(i, j + d, k) : at(i, j, k + d);
        };
        double v;
        if (q == 0)
          v = (2.0 * shift(0) - 5.0 * shift(1) + 4.0 * shift(2) - shift(3)) / h2;
        else if (q == s.n - 1)
          v = (2.0 * shift(0) - 5.0 * shift(-1) + 4.0 * shift(-2) - shift(-3)) / h2;
        else
          v = (shift(1) - 2.0 * shift(0) + shift(-1)) / h2;
        out[s.idx(i, j, k)] = v;
      }
  return out;
}

// Cumulative trapezoid along an axis starting from index 0.
Field integrate_axis(const GridSpec& s, const Field& f, int axis) {
  Field out(f.size(), 0.0);
  const double h = axis == 0 ? s.ht() : axis == 1 ? s.hx() : s.hy();
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b) {
      double acc = 0.0;
      for (int q = 0; q < s.n; ++q) {
        const auto id = [&](int w) {
          return axis == 0 ? s.idx(w, a, b) : axis == 1 ? s.idx(a, w, b) : s.idx(a, b, w);
        };
        if (q > 0) acc += 0.5 * h * (f[id(q - 1)] + f[id(q)]);
        out[id(q)] = acc;
      }
    }
  return out;
}

}  // namespace

GridMetricReport grid_to_metric_report(const GridSolution& sol, double lambda) {
  const GridSpec& s = sol.spec;
  const size_t total = static_cast<size_t>(s.n) * s.n * s.n;
  GridMetricReport rep;
  rep.h = std::max({s.ht(), s.hx(), s.hy()});

  const Field& U = sol.U;
  Field expU(total);
  for (size_t q = 0; q < total; ++q) expU[q] = std::exp(U[q]);

  const Field Ut = d_axis(s, U, 0);
  rep.v_min_abs = 1e300;
  Field V(total);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k) {
        const double tu = s.t(i) * Ut[s.idx(i, j, k)] - 2.0;
        rep.v_min_abs = std::min(rep.v_min_abs, std::abs(tu));
        if (std::abs(tu) < 1e-8)
          throw DegenerateV("t U_t - 2 vanishes at node (" + std::to_string(i) + "," +
                            std::to_string(j) + "," + std::to_string(k) + ")");
        V[s.idx(i, j, k)] = tu / (4.0 * lambda);
      }

  // Two-form F = d(alpha): -4L dalpha = (e^U)_t dx^dy + t dx^dU_y + t dU_x^dy
  const Field eUt = d_axis(s, expU, 0);
  const Field Ux = d_axis(s, U, 1);
  const Field Uy = d_axis(s, U, 2);
  const Field Uyt = d_axis(s, Uy, 0);
  const Field Uxt = d_axis(s, Ux, 0);
  const Field Uxx = dd_axis(s, U, 1);
  const Field Uyy = dd_axis(s, U, 2);

  Field Ftx(total), Fty(total), Fxy(total);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k) {
        const size_t q = s.idx(i, j, k);
        const double t = s.t(i);
        Ftx[q] = t * Uyt[q] / (4.0 * lambda);
        Fty[q] = -t * Uxt[q] / (4.0 * lambda);
        Fxy[q] = -(eUt[q] + t * (Uxx[q] + Uyy[q])) / (4.0 * lambda);
      }

  // Tree gauge: alpha_t = 0; alpha_x from t-integration of F_tx; alpha_y from
  // an x-integration on the base plane plus t-integration of F_ty.
  const Field ax = integrate_axis(s, Ftx, 0);
  Field ay = integrate_axis(s, Fty, 0);
  {
    Field base(total, 0.0);
    const Field base_xy = integrate_axis(s, Fxy, 1);
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j < s.n; ++j)
        for (int k = 0; k < s.n; ++k) ay[s.idx(i, j, k)] += base_xy[s.idx(0, j, k)];
  }

  for (size_t q = 0; q < total; ++q)
    rep.alpha_max = std::max({rep.alpha_max, std::abs(ax[q]), std::abs(ay[q])});

  // Closure of the built alpha against F, central-difference curl.
  {
    const Field ax_t = d_axis(s, ax, 0);
    const Field ay_t = d_axis(s, ay, 0);
    const Field ay_x = d_axis(s, ay, 1);
    const Field ax_y = d_axis(s, ax, 2);
    for (int i = 1; i < s.n - 1; ++i)
      for (int j = 1; j < s.n - 1; ++j)
        for (int k = 1; k < s.n - 1; ++k) {
          const size_t q = s.idx(i, j, k);
          rep.closure_max = std::max(rep.closure_max, std::abs(ax_t[q] - Ftx[q]));
          rep.closure_max = std::max(rep.closure_max, std::abs(ay_t[q] - Fty[q]));
          rep.closure_max = std::max(rep.closure_max, std::abs(ay_x[q] - ax_y[q] - Fxy[q]));
        }
  }

  // Euclidean block metric sampled on the grid.
  std::array<Field, 10> g;
  for (auto& f : g) f.assign(total, 0.0);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k) {
        const size_t q = s.idx(i, j, k);
        const double t = s.t(i);
        const double pref = V[q] / (t * t);
        const double w = 1.0 / (V[q] * t * t);
        const double a[4] = {0.0, ax[q], ay[q], 1.0};
        g[sym_index(0, 0)][q] = pref;
        g[sym_index(1, 1)][q] = pref * expU[q];
        g[sym_index(2, 2)][q] = pref * expU[q];
        for (int c = 0; c < 4; ++c)
          for (int d = c; d < 4; ++d) g[sym_index(c, d)][q] += w * a[c] * a[d];
      }

  std::array<std::array<Field, 10>, 3> dg;
  std::array<std::array<std::array<Field, 10>, 3>, 3> ddg;
  for (int ax1 = 0; ax1 < 3; ++ax1)
    for (int c = 0; c < 10; ++c) dg[static_cast<size_t>(ax1)][static_cast<size_t>(c)] = d_axis(s, g[static_cast<size_t>(c)], ax1);
  for (int ax1 = 0; ax1 < 3; ++ax1)
    for (int ax2 = ax1; ax2 < 3; ++ax2)
      for (int c = 0; c < 10; ++c) {
        if (ax1 == ax2)
          ddg[static_cast<size_t>(ax1)][static_cast<size_t>(ax2)][static_cast<size_t>(c)] = dd_axis(s, g[static_cast<size_t>(c)], ax1);
        else
          ddg[static_cast<size_t>(ax1)][static_cast<size_t>(ax2)][static_cast<size_t>(c)] =
              d_axis(s, dg[static_cast<size_t>(ax1)][static_cast<size_t>(c)], ax2);
      }

  for (int i = 1; i < s.n - 1; ++i)
    for (int j = 1; j < s.n - 1; ++j)
      for (int k = 1; k < s.n - 1; ++k) {
        const size_t q = s.idx(i, j, k);
        MetricPoint mp{};
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            mp.g[static_cast<size_t>(a * 4 + b)] = g[sym_index(a, b)][q];
            for (int c = 0; c < 3; ++c)
              mp.dg[static_cast<size_t>(c * 16 + a * 4 + b)] =
                  dg[static_cast<size_t>(c)][sym_index(a, b)][q];
            for (int c = 0; c < 3; ++c)
              for (int d = 0; d < 3; ++d) {
                const int lo = std::min(c, d), hi = std::max(c, d);
                mp.ddg[static_cast<size_t>((c * 4 + d) * 16 + a * 4 + b)] =
                    ddg[static_cast<size_t>(lo)][static_cast<size_t>(hi)][sym_index(a, b)][q];
              }
          }
        mp.scale = 0.0;
        for (const cplx& v : mp.g) mp.scale = std::max(mp.scale, std::abs(v));
        mp.det = invert4(mp.g, mp.ginv);
        const CurvatureBundle b = curvature_from_derivatives(mp, +1);
        rep.max_einstein_residual = std::max(rep.max_einstein_residual, b.einstein_residual);
        const double dev = std::abs(b.scalar + 4.0 * (6.0 * lambda)) / std::abs(6.0 * lambda);
        rep.max_scalar_deviation = std::max(rep.max_scalar_deviation, dev);
        ++rep.interior_nodes;
      }
  return rep;
}

void write_grid_csv(const GridSolution& sol, std::ostream& os) {
  const GridSpec& s = sol.spec;
  os << "# dims t x y\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "# box %.16e %.16e %.16e %.16e %.16e %.16e\n", s.t_range[0],
                s.t_range[1], s.x_range[0], s.x_range[1], s.y_range[0], s.y_range[1]);
  os << buf;
  os << "# n " << s.n << "\n";
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.16e\n", i, j, k, sol.U[s.idx(i, j, k)]);
        os << buf;
      }
}

}  // namespace hh
