#include "hurlab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "hurlab/geometry.hpp"
#include "hurlab/hzeta.hpp"
#include "hurlab/kernels.hpp"
#include "hurlab/parallel.hpp"
#include "hurlab/quadrature.hpp"

namespace hurlab {

namespace {

// The transition runs in log2 x with glue exp(-1.5 / t); of the steps tried
// this one has the smallest truncated Mellin tail near |Im w| = 40.
double glue(double t) { return t > 0.0 ? std::exp(-1.5 / t) : 0.0; }

// Precomputed rule for int_1^2 phi(x) x^{w-1} dx: c_k = w_k phi(x_k) / x_k and
// log x_k, so the integral is sum_k c_k exp(w log x_k).
struct MellinTable {
  std::vector<double> c;
  std::vector<double> logx;
};

MellinTable build_table(int panels) {
  Rule1D r = composite_gauss(1.0, 2.0, panels, 20);
  MellinTable t;
  for (std::size_t k = 0; k < r.x.size(); ++k) {
    double p = phi(r.x[k]);
    if (p == 0.0) continue;
    t.c.push_back(r.w[k] * p / r.x[k]);
    t.logx.push_back(std::log(r.x[k]));
  }
  return t;
}

// Panels so that each one sees at most ~4 radians of oscillation.
int panels_for(double v) { return std::max(16, static_cast<int>(std::ceil(std::abs(v) * std::log(2.0) / 4.0))); }

const MellinTable& cached_table() {
  static const MellinTable t = build_table(panels_for(1000.0));
  return t;
}

Complex mellin_integral(Complex w) {
  const bool cached = std::abs(w.imag()) <= 1000.0;
  std::unique_ptr<MellinTable> local;
  if (!cached) local = std::make_unique<MellinTable>(build_table(panels_for(w.imag())));
  const MellinTable& t = cached ? cached_table() : *local;
  CompensatedSum acc;
  for (std::size_t k = 0; k < t.c.size(); ++k) acc.add(t.c[k] * std::exp(w * t.logx[k]));
  return acc.value();
}

// Upper bound on |zeta(s, alpha)| for Re s > 0 from first-order Euler-Maclaurin.
double zeta_abs_bound(Complex s, double alpha) {
  const double sigma = s.real();
  const double M = std::max(1.0, std::ceil(std::abs(s.imag())));
  const double x = M + alpha;
  double head = std::pow(alpha, -sigma);
  if (M > 1.0) head += (std::pow(M - 1.0 + alpha, 1.0 - sigma) - std::pow(alpha, 1.0 - sigma)) / (1.0 - sigma);
  return head + std::pow(x, 1.0 - sigma) / std::abs(s - 1.0) + 0.5 * std::pow(x, -sigma) +
         std::abs(s) * std::pow(x, -sigma) / (2.0 * sigma);
}

}  // namespace

double phi(double x) {
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double y = std::log2(x);
  const double a = glue(1.0 - y), b = glue(y);
  return a / (a + b);
}

double phi_third_l1() {
  static const double value = [] {
    // total variation of phi'' on [1, 2]
    const int n = 200000;
    const double h = 1.0 / n, e = 1e-4;
    auto d2 = [&](double x) { return (phi(x + e) - 2.0 * phi(x) + phi(x - e)) / (e * e); };
    double tv = 0.0, prev = d2(1.0);
    for (int k = 1; k <= n; ++k) {
      double cur = d2(1.0 + k * h);
      tv += std::abs(cur - prev);
      prev = cur;
    }
    return 1.1 * tv;
  }();
  return value;
}

MellinValue phi_mellin(Complex w) {
  require_finite(w, "phi_mellin");
  if (w == Complex(0.0, 0.0)) throw PoleError("phi_mellin: pole at w = 0");
  if (w.real() <= -1.0) throw DomainError("phi_mellin: need Re w > -1");
  MellinValue out;
  out.w = w;
  out.value = 1.0 / w + mellin_integral(w);
  out.near_pole = std::abs(w) < 1e-2;
  return out;
}

double phi_mellin_bound(Complex w) {
  const double u = w.real();
  if (u <= -1.0) throw DomainError("phi_mellin_bound: need Re w > -1");
  return std::pow(2.0, u + 2.0) * phi_third_l1() /
         (std::abs(w) * std::abs(w + 1.0) * std::abs(w + 2.0));
}

Complex smoothed_sum(Complex s, double alpha, long N) {
  require_finite(s, "smoothed_sum");
  if (N < 1) throw DomainError("smoothed_sum: need N >= 1");
  if (!(alpha > 0.0)) throw DomainError("smoothed_sum: alpha must be positive");
  CompensatedSum acc;
  for (long n = 0; n + alpha < 2.0 * N; ++n) {
    const double x = n + alpha;
    acc.add(phi(x / N) * std::exp(-s * std::log(x)));
  }
  return acc.value();
}

Lemma34Result lemma34_residual(Complex s, double alpha, long N, double delta, double v_cutoff) {
  require_finite(s, "lemma34_residual");
  if (!(s.real() > 0.5 && s.real() <= 1.0)) throw DomainError("lemma34_residual: need 1/2 < Re s <= 1");
  if (!(delta > 0.0 && delta < s.real() - 0.5))
    throw DomainError("lemma34_residual: need 0 < delta < Re s - 1/2");
  if (!(v_cutoff > 0.0)) throw DomainError("lemma34_residual: v_cutoff must be positive");
  if (N < 1) throw DomainError("lemma34_residual: need N >= 1");

  Lemma34Result res;
  res.lhs = hurwitz(s, alpha);

  // (1/2 pi i) int_{-delta - iV}^{-delta + iV} ... dw = (1/2 pi) int_{-V}^{V} ... dv
  // The pole of phi^ at w = 0 sits delta off the line, so panels are graded
  // geometrically from width ~delta near v = 0 up to 0.5.
  std::vector<double> breaks{0.0};
  for (double b = std::min(delta, v_cutoff); breaks.back() < v_cutoff;) {
    breaks.push_back(b);
    b = std::min({b + std::min(b, 0.5), v_cutoff});
    if (b == breaks.back()) break;
  }
  Rule1D rule;
  auto add_panel = [&](double lo, double hi) {
    const Rule1D p = composite_gauss(lo, hi, 1, 16);
    rule.x.insert(rule.x.end(), p.x.begin(), p.x.end());
    rule.w.insert(rule.w.end(), p.w.begin(), p.w.end());
  };
  add_panel(-breaks[1], breaks[1]);
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
    add_panel(breaks[i], breaks[i + 1]);
    add_panel(-breaks[i + 1], -breaks[i]);
  }
  std::vector<double> taus(rule.x.size());
  for (std::size_t k = 0; k < rule.x.size(); ++k) taus[k] = rule.x[k];
  std::vector<Complex> zvals = shift_grid(alpha, {s - delta}, taus);
  const double logN = std::log(double(N));
  std::vector<Complex> terms(rule.x.size());
  par::parallel_for(static_cast<std::ptrdiff_t>(rule.x.size()), [&](std::ptrdiff_t k) {
    const Complex w(-delta, rule.x[k]);
    terms[k] = rule.w[k] * zvals[k] * phi_mellin(w).value * std::exp(w * logN);
  });
  CompensatedSum integral;
  for (const Complex& t : terms) integral.add(t);
  const Complex vertical = integral.value() / kTwoPi;

  const Complex pole_term = phi_mellin(1.0 - s).value * std::exp((1.0 - s) * logN);
  res.rhs = smoothed_sum(s, alpha, N) - vertical - pole_term;
  res.residual = std::abs(res.lhs - res.rhs);

  // Tail: (1/2 pi) N^{-delta} int_{|v| > V} |zeta(s - delta + iv)| |phi^(-delta + iv)| dv,
  // integrated as a left-endpoint sum on a geometric grid (the integrand decays).
  double tail = 0.0;
  for (int sgn : {+1, -1}) {
    double v = v_cutoff;
    const double ratio = 1.01;
    while (v < 1e7) {
      double vn = v * ratio;
      Complex w(-delta, sgn * v);
      tail += (vn - v) * zeta_abs_bound(s + w, alpha) * phi_mellin_bound(w);
      v = vn;
    }
    // beyond 1e7 the integrand is below C v^{-2.5}; bound the remainder
    Complex w(-delta, sgn * v);
    tail += zeta_abs_bound(s + w, alpha) * phi_mellin_bound(w) * v / 1.5;
  }
  res.tail_bound = tail * std::exp(-delta * logN) / kTwoPi;
  return res;
}

double averaged_distance(double alpha, long N, double T, int tau_samples, int M, int edge_points) {
  if (M < 1 || tau_samples < 1 || N < 1) throw DomainError("averaged_distance: bad parameters");
  // boundary nodes of K_1..K_M, with offsets per box
  std::vector<Complex> nodes;
  std::vector<std::size_t> offset{0};
  for (int nu = 1; nu <= M; ++nu) {
    auto b = CompactBox::exhaustion(nu).boundary(edge_points);
    nodes.insert(nodes.end(), b.begin(), b.end());
    offset.push_back(nodes.size());
  }
  std::vector<double> taus(tau_samples);
  for (int k = 0; k < tau_samples; ++k) taus[k] = (k + 0.5) * T / tau_samples;
  std::vector<Complex> z = shift_grid(alpha, nodes, taus);

  // Z_N shares the same structure: b_n(node) (n + alpha)^{-i tau}.
  std::vector<double> logs;
  std::vector<double> weights;
  for (long n = 0; n + alpha < 2.0 * N; ++n) {
    logs.push_back(std::log(n + alpha));
    weights.push_back(phi((n + alpha) / N));
  }
  const std::size_t L = logs.size(), J = nodes.size();
  std::vector<Complex> b(J * L);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t n = 0; n < L; ++n) b[j * L + n] = weights[n] * std::exp(-nodes[j] * logs[n]);

  std::vector<double> dist(tau_samples);
  par::parallel_for(tau_samples, [&](std::ptrdiff_t k) {
    std::vector<Complex> e(L);
    for (std::size_t n = 0; n < L; ++n) e[n] = std::polar(1.0, -taus[k] * logs[n]);
    double d = 0.0;
    for (int nu = 1; nu <= M; ++nu) {
      double sup = 0.0;
      for (std::size_t j = offset[nu - 1]; j < offset[nu]; ++j) {
        Complex zn(0.0, 0.0);
        for (std::size_t n = 0; n < L; ++n) zn += b[j * L + n] * e[n];
        sup = std::max(sup, std::abs(z[static_cast<std::size_t>(k) * J + j] - zn));
      }
      d += std::ldexp(sup / (1.0 + sup), -nu);
    }
    dist[k] = d;
  });
  double acc = 0.0;
  for (double d : dist) acc += d;
  return acc / tau_samples;
}

DistanceTrend distance_trend(double alpha, const std::vector<long>& Ns, double T, int tau_samples,
                             int M, int edge_points) {
  DistanceTrend out;
  for (long N : Ns) {
    out.N.push_back(N);
    out.mean_distance.push_back(averaged_distance(alpha, N, T, tau_samples, M, edge_points));
  }
  return out;
}

}  // namespace hurlab
