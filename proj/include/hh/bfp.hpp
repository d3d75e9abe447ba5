#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "hh/geometry.hpp"

namespace hh {

// Uniform Dirichlet grid for the elliptic equation
// D_tt(e^U) + D_xx U + D_yy U = 0 on [t0,t1]x[x0,x1]x[y0,y1], t0 > 0.
struct GridSpec {
  std::array<double, 2> t_range{1.0, 2.0};
  std::array<double, 2> x_range{0.0, 1.0};
  std::array<double, 2> y_range{0.0, 1.0};
  int n = 17;  // points per axis, >= 5
  std::function<double(double, double, double)> bc;

  void validate() const;
  double ht() const { return (t_range[1] - t_range[0]) / (n - 1); }
  double hx() const { return (x_range[1] - x_range[0]) / (n - 1); }
  double hy() const { return (y_range[1] - y_range[0]) / (n - 1); }
  double t(int i) const { return t_range[0] + ht() * i; }
  double x(int j) const { return x_range[0] + hx() * j; }
  double y(int k) const { return y_range[0] + hy() * k; }
  size_t idx(int i, int j, int k) const {
    return (static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)) *
               static_cast<size_t>(n) +
           static_cast<size_t>(k);
  }
};

struct GridSolution {
  GridSpec spec;
  std::vector<double> U;       // n^3 node values; boundary equals bc exactly
  double residual_norm = 0.0;  // max-norm of the discrete operator, interior
  int newton_iters = 0;
};

// Per-node residual of the 7-point stencil (zero on boundary nodes).
std::vector<double> discrete_residual(const GridSolution& sol);
double discrete_residual_norm(const GridSolution& sol);

enum class BfpInit { zero, bc_harmonic_extension };

// Damped Newton on the discrete system with analytic Jacobian. The linear
// solves go through a banded direct factorization on small grids and a
// Jacobi-preconditioned BiCGStab above that. Throws NoConvergence (carrying
// the best residual) when the damping floor 2^-20 or max_iters is hit.
GridSolution solve_bfp(const GridSpec& spec, BfpInit init = BfpInit::bc_harmonic_extension,
                       bool damped = true, double tol = 1e-10, int max_iters = 25);

struct GridMetricReport {
  double max_einstein_residual = 0.0;  // discretization-limited, O(h^2)
  double max_scalar_deviation = 0.0;   // vs R = -4 (6 Lambda), relative
  double closure_max = 0.0;            // two-form closure of the built alpha
  double alpha_max = 0.0;              // sup norm of the built 1-form
  double v_min_abs = 0.0;              // min |t U_t - 2| seen
  int interior_nodes = 0;
  double h = 0.0;                      // max spacing
};

// Builds V and a 1-form alpha (by line integration of the two-form along
// t-edges first, then x, then y), assembles the Euclidean block metric on the
// grid, and evaluates its Einstein residual with finite-difference curvature
// at interior nodes.
GridMetricReport grid_to_metric_report(const GridSolution& sol, double lambda);

// One node per row after `# dims` / `# box` / `# n` headers.
void write_grid_csv(const GridSolution& sol, std::ostream& os);

}  // namespace hh
