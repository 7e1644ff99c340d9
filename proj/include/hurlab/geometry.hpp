#pragma once

// The metric of H(D) through the compact exhaustion K_nu, Bergman-space inner
// products on rectangles by tensor Gauss-Legendre quadrature, and finite-N
// phase and coefficient fits in A^2(U).

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hurlab/common.hpp"

namespace hurlab {

using HolFn = std::function<Complex(Complex)>;

struct CompactBox {
  int nu = 1;
  double sigma_lo = 0.0, sigma_hi = 0.0, t_lo = 0.0, t_hi = 0.0;

  // K_nu = [1/2 + 1/(5 nu), 1 - 1/(5 nu)] x [-nu, nu].
  static CompactBox exhaustion(int nu);
  bool contains(Complex s) const;
  // per_edge points on each edge (corners once each), counterclockwise.
  std::vector<Complex> boundary(int per_edge) const;
  // nx x ny uniform grid including the boundary.
  std::vector<Complex> grid(int nx, int ny) const;
};

struct DMetricOptions {
  int grid = 64;               // points per axis on K_nu
  bool refine = true;          // also sup over the (2 grid - 1) refinement
  bool boundary_only = false;  // sup over the boundary (maximum modulus)
  int edge_points = 256;
};

struct DMetricValue {
  double value = 0.0;  // d_M = sum_{nu <= M} 2^{-nu} d_nu / (1 + d_nu)
  double tail = 0.0;   // 2^{-M}; d lies in [value, value + tail]
  std::vector<double> sup_coarse;
  std::vector<double> sup;  // d_nu used in the sum
};

DMetricValue d_metric(const HolFn& f, const HolFn& g, int M, const DMetricOptions& opt = {});

struct RectDomainU {
  double sigma_a = 0.6, sigma_b = 0.9, t_a = 0.0, t_b = 1.0;
  int sigma_order = 16;
  int t_panels = 1;
  int t_order = 16;

  void validate() const;  // 1/2 < sigma_a < sigma_b < 1, t_a < t_b
  double area() const;
  // K = int int_U |s|^2 d sigma dt
  double abs_s2_integral() const;
  bool operator==(const RectDomainU&) const = default;
};

struct QuadGrid {
  RectDomainU U;
  std::vector<Complex> nodes;
  std::vector<double> weights;
};

std::shared_ptr<const QuadGrid> make_grid(const RectDomainU& U);

struct GridFunction {
  std::shared_ptr<const QuadGrid> grid;
  std::vector<Complex> values;

  static GridFunction sample(std::shared_ptr<const QuadGrid> grid, const HolFn& f);
  // (n + alpha)^{-s} on the grid
  static GridFunction dirichlet_term(std::shared_ptr<const QuadGrid> grid, double alpha, long n);
};

// Throws GridMismatch if the two functions live on different grids, or on a
// grid other than the quadrature grid of U.
Complex bergman_inner(const GridFunction& f, const GridFunction& g);
Complex bergman_inner(const GridFunction& f, const GridFunction& g, const RectDomainU& U);
double bergman_norm(const GridFunction& f);

enum class PhaseInit { greedy, random, warm };

struct GammaFitOptions {
  int max_sweeps = 200;
  double tol = 1e-15;  // stop when a sweep improves the residual by less than tol * ||f||
  PhaseInit init = PhaseInit::greedy;
  std::uint64_t seed = 1;
  std::vector<Complex> warm_start;  // leading phases for PhaseInit::warm
};

struct GammaFitResult {
  std::vector<Complex> gamma;
  double residual = 0.0;
  std::vector<double> history;  // residual after initialization and after each sweep
  int sweeps = 0;
  bool budget_exhausted = false;
};

// Minimizes ||f - sum_{n <= N} gamma_n (n + alpha)^{-s}|| over |gamma_n| = 1 by
// coordinate descent with closed-form phase updates. Requires N >= 4.
GammaFitResult gamma_fit(const GridFunction& f, double alpha, int N, const GammaFitOptions& opt = {});

struct BetaFitOptions {
  int polish_sweeps = 200;
  double polish_tol = 1e-15;
  std::vector<Complex> warm_start;  // coefficients for n = M+1, ..., M+size
  double max_condition = 1e12;
};

struct BetaFitResult {
  std::vector<Complex> beta;  // beta_n for n = M+1..N
  double residual = 0.0;
  bool regularized = false;
  double condition = 0.0;
  double projected_residual = 0.0;  // after radial projection, before polish
};

// Fits f by sum_{M < n <= N} beta_n (n + c)^{-s} with |beta_n| <= 1.
BetaFitResult beta_fit(const GridFunction& f, double c, int M, int N, const BetaFitOptions& opt = {});

// min over unconstrained beta of the same residual (least-squares oracle).
double unconstrained_ls_residual(const GridFunction& f, double c, int M, int N);

struct PerturbationBound {
  double lhs = 0.0;
  double rhs = 0.0;
  double K = 0.0;
};

// lhs = ||sum_{n <= N} gamma_n ((n + c + rho)^{-s} - (n + c)^{-s})|| on the grid,
// rhs = rho sqrt(K) zeta(3/2, c/2). Requires 0 <= rho <= min(c, 1 - c)/2.
PerturbationBound perturbation_bound(double c, double rho, std::shared_ptr<const QuadGrid> grid,
                                     const std::vector<Complex>& gamma);

// Unimodular gamma_j with ||sum (beta_j - gamma_j) x_j||^2 <= sum ||x_j||^2,
// chosen sequentially so each cross term is nonpositive. Requires |beta_j| <= 1.
std::vector<Complex> align_phases(const std::vector<GridFunction>& x, const std::vector<Complex>& beta);

}  // namespace hurlab
