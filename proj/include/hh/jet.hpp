#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "hh/errors.hpp"

namespace hh {

using cplx = std::complex<double>;

// Index into the packed upper triangle of a symmetric 4x4 array.
// (0,0)=0 (0,1)=1 (0,2)=2 (0,3)=3 (1,1)=4 (1,2)=5 (1,3)=6 (2,2)=7 (2,3)=8 (3,3)=9
constexpr int sym_index(int i, int j) {
  return (i <= j) ? i * (7 - i) / 2 + j : j * (7 - j) / 2 + i;
}

// Second-order truncated jet: a value together with its four first and ten
// second partial derivatives with respect to the chart coordinates.
// Arithmetic follows the truncated Taylor rules, so evaluating an expression
// tree on seeded jets yields machine-precision derivatives.
struct Jet2 {
  cplx v{};
  std::array<cplx, 4> d{};
  std::array<cplx, 10> h{};

  Jet2() = default;
  Jet2(cplx value) : v(value) {}
  Jet2(double value) : v(value) {}

  static Jet2 seed(cplx value, int coord) {
    Jet2 j(value);
    j.d[static_cast<size_t>(coord)] = 1.0;
    return j;
  }
};

inline double mag(const Jet2& a) { return std::abs(a.v); }
inline double mag(const cplx& a) { return std::abs(a); }
inline double mag(const std::complex<long double>& a) { return static_cast<double>(std::abs(a)); }

inline Jet2 operator-(const Jet2& a) {
  Jet2 r;
  r.v = -a.v;
  for (int i = 0; i < 4; ++i) r.d[i] = -a.d[i];
  for (int i = 0; i < 10; ++i) r.h[i] = -a.h[i];
  return r;
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v + b.v;
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] + b.d[i];
  for (int i = 0; i < 10; ++i) r.h[i] = a.h[i] + b.h[i];
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v - b.v;
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] - b.d[i];
  for (int i = 0; i < 10; ++i) r.h[i] = a.h[i] - b.h[i];
  return r;
}

// (fg)'' = f''g + f'g' + g'f' + fg''
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v * b.v;
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const int k = sym_index(i, j);
      r.h[k] = a.h[k] * b.v + a.d[i] * b.d[j] + a.d[j] * b.d[i] + a.v * b.h[k];
    }
  return r;
}

// Composition with a scalar function given its first two derivatives at u.v.
inline Jet2 jet_chain(const Jet2& u, cplx f0, cplx f1, cplx f2) {
  Jet2 r;
  r.v = f0;
  for (int i = 0; i < 4; ++i) r.d[i] = f1 * u.d[i];
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const int k = sym_index(i, j);
      r.h[k] = f2 * u.d[i] * u.d[j] + f1 * u.h[k];
    }
  return r;
}

inline Jet2 jet_inv(const Jet2& b) {
  if (mag(b) < 1e-12) throw SingularPoint("division by value within 1e-12 of zero");
  const cplx w = 1.0 / b.v;
  return jet_chain(b, w, -w * w, 2.0 * w * w * w);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * jet_inv(b); }

inline Jet2 exp(const Jet2& a) {
  const cplx e = std::exp(a.v);
  return jet_chain(a, e, e, e);
}

inline Jet2 log(const Jet2& a) {
  if (mag(a) < 1e-12) throw SingularPoint("log of value within 1e-12 of zero");
  const cplx w = 1.0 / a.v;
  return jet_chain(a, std::log(a.v), w, -w * w);
}

inline Jet2 sqrt(const Jet2& a) {
  if (mag(a) < 1e-12) throw SingularPoint("sqrt of value within 1e-12 of zero");
  const cplx s = std::sqrt(a.v);
  const cplx f1 = 0.5 / s;
  return jet_chain(a, s, f1, -0.25 / (s * a.v));
}

// Integer powers by repeated multiplication; valid on the whole punctured
// plane, no branch cut involved.
inline Jet2 ipow(const Jet2& a, int n) {
  if (n == 0) return Jet2(1.0);
  const bool neg = n < 0;
  unsigned m = neg ? static_cast<unsigned>(-(long long)n) : static_cast<unsigned>(n);
  Jet2 acc(1.0);
  Jet2 base = a;
  while (m) {
    if (m & 1u) acc = acc * base;
    base = base * base;
    m >>= 1;
  }
  if (neg) return jet_inv(acc);
  return acc;
}

inline Jet2 pow(const Jet2& a, const Jet2& b) { return exp(b * log(a)); }

inline Jet2 pow(const Jet2& a, cplx c) {
  if (mag(a) < 1e-12) throw SingularPoint("pow base within 1e-12 of zero");
  const cplx f0 = std::pow(a.v, c);
  const cplx f1 = c * std::pow(a.v, c - 1.0);
  const cplx f2 = c * (c - 1.0) * std::pow(a.v, c - 2.0);
  return jet_chain(a, f0, f1, f2);
}

}  // namespace hh
