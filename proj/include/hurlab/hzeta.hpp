#pragma once

// Hurwitz zeta evaluation by Euler-Maclaurin summation, derivatives by
// contour quadrature, the approximate functional equation used on vertical
// lines, and line mean values.

#include <vector>

#include "hurlab/common.hpp"

namespace hurlab {

struct EvalPolicy {
  double target_abs_error = 1e-12;
  int M = 0;   // leading terms; 0 picks max(ceil(|t|/2), 30) and grows as needed
  int J = 12;  // Bernoulli correction terms (1..60)
};

struct EvalResult {
  Complex value;
  bool out_of_range = false;  // outside sigma >= -1, |t| <= 1e5
  double error_bound = 0.0;   // Euler-Maclaurin remainder bound
  int terms = 0;
};

// zeta(s, alpha) for alpha > 0. Throws PoleError at s = 1 and DomainError on
// non-finite input.
EvalResult hurwitz_eval(Complex s, double alpha, const EvalPolicy& policy = {});
inline Complex hurwitz(Complex s, double alpha, const EvalPolicy& policy = {}) {
  return hurwitz_eval(s, alpha, policy).value;
}

// Euler-Maclaurin tail starting at x = M + alpha: the integral term, the
// half term, and J Bernoulli corrections. Shared with the scan kernels.
Complex euler_maclaurin_tail(Complex s, double x, int J);
double euler_maclaurin_bound(Complex s, double x, int J);
int euler_maclaurin_terms(double t_abs);

struct AfeResult {
  Complex value;
  double bound = 0.0;
};

// sum_{0 <= n <= V} (n + alpha)^{-s} + V^{1-s}/(s-1), s = sigma + iv, with the
// error bound C V^{-sigma}. Requires 1/2 < sigma < 1 and 2 pi <= |v| <= pi V.
AfeResult hurwitz_afe(double sigma, double v, double alpha, double V, double C = 10.0);

// n-th derivative at s0 by the trapezoidal rule on |s - s0| = r, doubling the
// node count (64 up to 256) until stable. r <= 0 picks min(0.1, |s0 - 1|/2).
// Throws ContourError when the circle reaches s = 1.
Complex derivative(int n, Complex s0, double alpha, double r = 0.0);

// Same quadrature returning all derivatives 0..n at once.
std::vector<Complex> derivatives(int n, Complex s0, double alpha, double r = 0.0);

struct LineMean {
  double mean = 0.0;
  double bound_shape = 0.0;  // 1/sqrt(2 sigma - 1) + 1/(1 - sigma)
  int samples = 0;
};

// (1/T) int_0^T |zeta(sigma + i tau, alpha)| d tau by the trapezoidal rule.
LineMean line_mean_abs(double sigma, double alpha, double T, int num_samples);

}  // namespace hurlab
