#include "hurlab/hzeta.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "hurlab/kernels.hpp"

namespace hurlab {

namespace {

constexpr double kValidSigmaMin = -1.0;
constexpr double kValidTMax = 1e5;

void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0) throw DomainError("hurwitz: alpha must be positive");
}

// B_{2j}/(2j)! for j = 1..60.
const std::vector<double>& bernoulli_ratios() {
  static const std::vector<double> v = [] {
    std::vector<double> out(61, 0.0);
    for (int j = 1; j <= 60; ++j)
      out[j] = boost::math::bernoulli_b2n<double>(j) / boost::math::factorial<double>(2 * j);
    return out;
  }();
  return v;
}

}  // namespace

int euler_maclaurin_terms(double t_abs) {
  return std::max(static_cast<int>(std::ceil(t_abs / 2.0)), 30);
}

Complex euler_maclaurin_tail(Complex s, double x, int J) {
  const auto& br = bernoulli_ratios();
  const double lx = std::log(x);
  const Complex xs = std::exp(-s * lx);  // x^{-s}
  CompensatedSum acc;
  acc.add(xs * x / (s - 1.0));
  acc.add(0.5 * xs);
  Complex poch = s;              // (s)_{2j-1}
  Complex pw = xs / x;           // x^{-s-2j+1}
  const double inv_x2 = 1.0 / (x * x);
  for (int j = 1; j <= J; ++j) {
    acc.add(br[j] * poch * pw);
    poch *= (s + double(2 * j - 1)) * (s + double(2 * j));
    pw *= inv_x2;
  }
  return acc.value();
}

double euler_maclaurin_bound(Complex s, double x, int J) {
  const double sigma = s.real();
  const double denom = sigma + 2.0 * J - 1.0;
  if (denom <= 0.0) return INFINITY;
  double poch = 1.0;
  for (int k = 0; k < 2 * J; ++k) poch *= std::abs(s + double(k)) / kTwoPi;
  return 4.0 * poch * std::pow(x, 1.0 - sigma - 2.0 * J) / denom;
}

EvalResult hurwitz_eval(Complex s, double alpha, const EvalPolicy& policy) {
  require_finite(s, "hurwitz");
  check_alpha(alpha);
  if (s == Complex(1.0, 0.0)) throw PoleError("hurwitz: pole at s = 1");
  if (policy.J < 1 || policy.J > 60) throw DomainError("hurwitz: J must be in 1..60");
  if (!(policy.target_abs_error > 0.0)) throw DomainError("hurwitz: target error must be positive");

  EvalResult res;
  res.out_of_range = s.real() < kValidSigmaMin || std::abs(s.imag()) > kValidTMax;
  long M = policy.M > 0 ? policy.M : euler_maclaurin_terms(std::abs(s.imag()));
  double bound = euler_maclaurin_bound(s, M + alpha, policy.J);
  while (bound > policy.target_abs_error && M < 50'000'000) {
    M += M / 2 + 1;
    bound = euler_maclaurin_bound(s, M + alpha, policy.J);
  }
  CompensatedSum acc;
  for (long n = 0; n < M; ++n) acc.add(std::exp(-s * std::log(n + alpha)));
  acc.add(euler_maclaurin_tail(s, M + alpha, policy.J));
  res.value = acc.value();
  res.error_bound = bound;
  res.terms = static_cast<int>(M);
  return res;
}

AfeResult hurwitz_afe(double sigma, double v, double alpha, double V, double C) {
  check_alpha(alpha);
  if (!(sigma > 0.5 && sigma < 1.0)) throw DomainError("hurwitz_afe: need 1/2 < sigma < 1");
  if (!(std::abs(v) >= kTwoPi && std::abs(v) <= kPi * V))
    throw DomainError("hurwitz_afe: need 2 pi <= |v| <= pi V");
  const Complex s(sigma, v);
  CompensatedSum acc;
  for (long n = 0; n <= static_cast<long>(std::floor(V)); ++n)
    acc.add(std::exp(-s * std::log(n + alpha)));
  acc.add(std::exp((1.0 - s) * std::log(V)) / (s - 1.0));
  return {acc.value(), C * std::pow(V, -sigma)};
}

std::vector<Complex> derivatives(int n, Complex s0, double alpha, double r) {
  require_finite(s0, "derivative");
  check_alpha(alpha);
  if (n < 0 || n > 10) throw DomainError("derivative: order must be in 0..10");
  const double dist = std::abs(s0 - 1.0);
  if (r <= 0.0) r = std::min(0.1, 0.5 * dist);
  if (!(r > 0.0) || dist <= r) throw ContourError("derivative: contour reaches the pole s = 1");

  auto estimate = [&](int P, double& fmax) {
    std::vector<Complex> fk(P);
    fmax = 0.0;
    for (int k = 0; k < P; ++k) {
      double th = kTwoPi * k / P;
      fk[k] = hurwitz(s0 + r * std::polar(1.0, th), alpha);
      fmax = std::max(fmax, std::abs(fk[k]));
    }
    std::vector<Complex> out(n + 1);
    double scale = 1.0;
    for (int m = 0; m <= n; ++m) {
      CompensatedSum acc;
      for (int k = 0; k < P; ++k) acc.add(fk[k] * std::polar(1.0, -kTwoPi * double(m) * k / P));
      out[m] = acc.value() * (scale / P);
      scale *= double(m + 1) / r;
    }
    return out;
  };

  double fmax = 0.0;
  std::vector<Complex> prev = estimate(64, fmax);
  for (int P = 128; P <= 256; P *= 2) {
    std::vector<Complex> cur = estimate(P, fmax);
    bool stable = true;
    double scale = 1.0;
    for (int m = 0; m <= n; ++m) {
      if (std::abs(cur[m] - prev[m]) > 1e-13 * scale * std::max(1.0, fmax)) stable = false;
      scale *= double(m + 1) / r;
    }
    prev = std::move(cur);
    if (stable) break;
  }
  return prev;
}

Complex derivative(int n, Complex s0, double alpha, double r) {
  return derivatives(n, s0, alpha, r)[n];
}

LineMean line_mean_abs(double sigma, double alpha, double T, int num_samples) {
  if (!(sigma > 0.5 && sigma < 1.0)) throw DomainError("line_mean_abs: need 1/2 < sigma < 1");
  if (!(T >= 3.0)) throw DomainError("line_mean_abs: need T >= 3");
  if (num_samples < 2) throw DomainError("line_mean_abs: need at least two samples");
  const double h = T / (num_samples - 1);
  std::vector<double> taus(num_samples);
  for (int k = 0; k < num_samples; ++k) taus[k] = h * k;
  std::vector<Complex> vals = shift_grid(alpha, {Complex(sigma, 0.0)}, taus);
  double acc = 0.5 * (std::abs(vals.front()) + std::abs(vals.back()));
  for (int k = 1; k + 1 < num_samples; ++k) acc += std::abs(vals[k]);
  LineMean out;
  out.mean = acc * h / T;
  out.bound_shape = 1.0 / std::sqrt(2.0 * sigma - 1.0) + 1.0 / (1.0 - sigma);
  out.samples = num_samples;
  return out;
}

}  // namespace hurlab
