#pragma once

// Beurling-Selberg functions H, K, the interval majorant pair U_{s,t},
// K_{s,t}, their Fourier transforms, the 2 pi periodizations as trigonometric
// polynomials, and a sampled check of the product approximation on the torus.

#include <cstdint>
#include <vector>

#include "hurlab/common.hpp"

namespace hurlab {

// H(x) = (sin pi x / pi)^2 { sum_m sgn(m) / (x - m)^2 + 2 / x }, summed over
// |m| <= max(1000, 10|x|) with the remainder added through trigamma.
// tail_bound, if given, receives a bound on the size of that remainder.
double bs_H(double x, double* tail_bound = nullptr);
// Reflection form sgn(x) (1 + D(|x|)) with one trigamma call, used where many
// evaluations are needed.
double bs_H_fast(double x);
// (sin pi x / (pi x))^2
double bs_K(double x);

struct ArcSpec {
  double s = 0.0, t = 1.0, Delta = 10.0;

  void validate() const;  // 0 < t - s <= 2 pi, Delta > 3
  double scale() const { return Delta / kTwoPi; }
  int degree() const;  // floor(Delta)
  // theta (mod 2 pi) lies in the open arc (s, t)
  bool contains(double theta) const;
};

double bs_U(const ArcSpec& a, double x);
double bs_Kst(const ArcSpec& a, double x);

// Fourier transform of E(y) = H(y) - sgn(y): -2i int_0^inf D(y) sin(omega y) dy.
// quad_tail, if given, receives the bound on the truncated integral.
Complex bs_E_transform(double omega, double* quad_tail = nullptr);

// int U_{s,t}(x) e^{-i x xi} dx and int K_{s,t}(x) e^{-i x xi} dx.
Complex bs_U_transform(const ArcSpec& a, double xi);
Complex bs_K_transform(const ArcSpec& a, double xi);

// Coefficients c_m for |m| <= degree, stored at index m + degree; the value at
// e^{i theta} is sum_m c_m e^{i m theta}.
struct TrigPoly {
  int degree = 0;
  std::vector<Complex> c;

  Complex coeff(int m) const { return c[static_cast<std::size_t>(m + degree)]; }
  Complex eval(double theta) const;
  double eval_real(double theta) const { return eval(theta).real(); }
};

struct FourierCoeffs {
  int degree = 0;
  std::vector<Complex> U;  // U~(m, Delta), |m| <= degree
  std::vector<Complex> K;
  double quad_tail = 0.0;
};

FourierCoeffs fourier_coeffs(const ArcSpec& a);

struct Periodized {
  TrigPoly U, K;
};

Periodized periodized(const ArcSpec& a);
Periodized periodized(const FourierCoeffs& fc);

// sum_{|k| <= kmax} U_{s,t}(theta + 2 k pi), and the same for K_{s,t}.
double periodized_U_spatial(const ArcSpec& a, double theta, int kmax = 50);
double periodized_K_spatial(const ArcSpec& a, double theta, int kmax = 50);

struct Lemma51Report {
  double max_ratio = 0.0;
  double max_abs_diff = 0.0;  // max |prod 1_A - prod U|
  long samples = 0;
  long skipped = 0;  // sum K below 1e-15
  double numerical_floor = 0.0;  // largest error bound subtracted from a numerator
};

// Samples uniform points on the (N+1)-torus and returns the largest
// |prod 1_A(z_n) - prod U(z_n)| / ((log Delta)^{N+1} sum K(z_n)).
// The numerator is reduced by the certified error of the computed product, so
// points where both sides vanish to rounding level do not count as failures.
// All arcs must share the same Delta.
Lemma51Report lemma51_check(const std::vector<ArcSpec>& arcs, long samples, std::uint64_t seed);

}  // namespace hurlab
