#pragma once

// The smooth cutoff phi, its Mellin transform, the smoothed sums Z_N(s, alpha)
// and numerical checks of the contour-shift identity relating them to zeta.

#include <vector>

#include "hurlab/common.hpp"

namespace hurlab {

// phi = 1 on [0, 1], 0 on [2, inf), and a smooth step in log2 x between.
double phi(double x);

// L1 norm of phi''' on [1, 2] (finite differences with a 10% margin).
double phi_third_l1();

struct MellinValue {
  Complex w;
  Complex value;
  bool near_pole = false;  // |w| < 1e-2
};

// int_0^inf phi(x) x^{w-1} dx = 1/w + int_1^2 phi(x) x^{w-1} dx.
// Throws PoleError at w = 0 and DomainError for Re w <= -1.
MellinValue phi_mellin(Complex w);

// Upper bound on |phi_mellin(w)| from three integrations by parts.
double phi_mellin_bound(Complex w);

// sum over n + alpha < 2N of (n + alpha)^{-s} phi((n + alpha)/N).
Complex smoothed_sum(Complex s, double alpha, long N);

struct Lemma34Result {
  double residual = 0.0;    // |lhs - rhs| with the integral cut at |v| <= v_cutoff
  double tail_bound = 0.0;  // bound on the discarded |v| > v_cutoff part
  Complex lhs;              // zeta(s, alpha)
  Complex rhs;              // Z_N - (1/2 pi i) int ... - phi^(1 - s) N^{1-s}
};

// Requires 1/2 < Re s <= 1, 0 < delta < Re s - 1/2, v_cutoff > 0.
Lemma34Result lemma34_residual(Complex s, double alpha, long N, double delta, double v_cutoff);

// Sampled (1/T) int_0^T d_M(zeta(. + i tau), Z_N(. + i tau)) d tau, with the
// sup over each K_nu taken on its boundary (maximum modulus).
struct DistanceTrend {
  std::vector<long> N;
  std::vector<double> mean_distance;
};
double averaged_distance(double alpha, long N, double T, int tau_samples, int M, int edge_points);
DistanceTrend distance_trend(double alpha, const std::vector<long>& Ns, double T, int tau_samples,
                             int M, int edge_points);

}  // namespace hurlab
