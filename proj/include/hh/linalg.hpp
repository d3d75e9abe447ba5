#pragma once

#include <array>
#include <complex>

#include "hh/jet.hpp"

namespace hh {

using CMat4 = std::array<cplx, 16>;  // row-major 4x4

// LU with partial pivoting; returns det and writes the inverse.
// Throws DegenerateMetric when the pivot collapses.
cplx invert4(const CMat4& m, CMat4& inv);

cplx det4(const CMat4& m);

// Eigenvalues of a real symmetric 4x4 by cyclic Jacobi, ascending order.
std::array<double, 4> sym4_eigenvalues(const std::array<double, 16>& m);

// (#positive, #negative) eigenvalue counts with |lambda| <= tol treated as a
// degeneracy error.
std::array<int, 2> sym4_signature(const std::array<double, 16>& m, double tol);

}  // namespace hh
