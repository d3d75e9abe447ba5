#include "hh/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "hh/errors.hpp"

namespace hh {

cplx invert4(const CMat4& m, CMat4& inv) {
  // Gauss-Jordan with partial pivoting on an augmented 4x8 system.
  cplx a[4][8];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      a[i][j] = m[static_cast<size_t>(i * 4 + j)];
      a[i][j + 4] = (i == j) ? cplx(1.0) : cplx(0.0);
    }
  cplx det(1.0);
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    double best = std::abs(a[col][col]);
    for (int r = col + 1; r < 4; ++r) {
      const double v = std::abs(a[r][col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-300) throw DegenerateMetric("pivot collapse while inverting metric");
    if (piv != col) {
      for (int j = 0; j < 8; ++j) std::swap(a[piv][j], a[col][j]);
      det = -det;
    }
    det *= a[col][col];
    const cplx w = cplx(1.0) / a[col][col];
    for (int j = 0; j < 8; ++j) a[col][j] *= w;
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const cplx f = a[r][col];
      if (f == cplx(0.0)) continue;
      for (int j = 0; j < 8; ++j) a[r][j] -= f * a[col][j];
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv[static_cast<size_t>(i * 4 + j)] = a[i][j + 4];
  return det;
}

cplx det4(const CMat4& m) {
  CMat4 scratch;
  return invert4(m, scratch);
}

std::array<double, 4> sym4_eigenvalues(const std::array<double, 16>& m) {
  double a[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] = m[static_cast<size_t>(i * 4 + j)];

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::array<double, 4> ev{a[0][0], a[1][1], a[2][2], a[3][3]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::array<int, 2> sym4_signature(const std::array<double, 16>& m, double tol) {
  const auto ev = sym4_eigenvalues(m);
  int pos = 0, neg = 0;
  for (double v : ev) {
    if (std::abs(v) <= tol)
      throw DegenerateMetric("eigenvalue within tolerance of zero in signature computation");
    (v > 0 ? pos : neg)++;
  }
  return {pos, neg};
}

}  // namespace hh
