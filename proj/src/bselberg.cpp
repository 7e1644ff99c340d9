#include "hurlab/bselberg.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/trigamma.hpp>

#include "hurlab/parallel.hpp"
#include "hurlab/quadrature.hpp"
#include "hurlab/randmodel.hpp"

namespace hurlab {

namespace {

constexpr double kPi2 = kPi * kPi;

// (sin pi u / (pi u))^2 given sp = sin(pi u)
double sinc2_from(double sp, double u) { return u == 0.0 ? 1.0 : sp * sp / (kPi2 * u * u); }

// D(y) = H(y) - 1 for y > 0, and D(0) = -1.
double vaaler_D(double y) {
  if (y == 0.0) return -1.0;
  const double sp = std::sin(kPi * (y - std::nearbyint(y)));
  return sp * sp / kPi2 * (2.0 / y - 1.0 / (y * y) - 2.0 * boost::math::trigamma(1.0 + y));
}

// Gauss-Legendre nodes on [0, Y] with D(y) precomputed.
struct DTable {
  static constexpr double Y = 1000.0;
  std::vector<double> y, wd;
};

const DTable& d_table() {
  static const DTable t = [] {
    DTable d;
    Rule1D r = composite_gauss(0.0, DTable::Y, static_cast<int>(DTable::Y / 0.5), 16);
    d.y = r.x;
    d.wd.resize(r.x.size());
    for (std::size_t k = 0; k < r.x.size(); ++k) d.wd[k] = r.w[k] * vaaler_D(r.x[k]);
    return d;
  }();
  return t;
}

}  // namespace

double bs_H(double x, double* tail_bound) {
  if (!std::isfinite(x)) throw DomainError("bs_H: x must be finite");
  if (tail_bound) *tail_bound = 0.0;
  if (x == 0.0) return 0.0;
  const double sp = std::sin(kPi * (x - std::nearbyint(x)));
  const long M = std::max<long>(1000, static_cast<long>(std::ceil(10.0 * std::abs(x))));
  CompensatedSum acc;
  for (long m = M; m >= 1; --m) {
    acc.add(sinc2_from(sp, x - double(m)));
    acc.add(-sinc2_from(sp, x + double(m)));
  }
  acc.add(2.0 * sp * sp / (kPi2 * x));
  const double pref = sp * sp / kPi2;
  const double tail = pref * (boost::math::trigamma(M + 1.0 - x) - boost::math::trigamma(M + 1.0 + x));
  if (tail_bound) *tail_bound = pref * 2.0 * std::abs(x) / (0.98 * double(M) * double(M));
  return acc.value().real() + tail;
}

double bs_H_fast(double x) {
  if (x == 0.0) return 0.0;
  const double d = vaaler_D(std::abs(x));
  return x > 0.0 ? 1.0 + d : -1.0 - d;
}

double bs_K(double x) {
  const double sp = std::sin(kPi * (x - std::nearbyint(x)));
  return sinc2_from(sp, x);
}

void ArcSpec::validate() const {
  if (!(std::isfinite(s) && std::isfinite(t) && t > s && t - s <= kTwoPi))
    throw DomainError("ArcSpec: need 0 < t - s <= 2 pi");
  if (!(Delta > 3.0 && std::isfinite(Delta))) throw DomainError("ArcSpec: need Delta > 3");
}

int ArcSpec::degree() const { return static_cast<int>(std::floor(Delta)); }

bool ArcSpec::contains(double theta) const {
  double u = std::fmod(theta - s, kTwoPi);
  if (u < 0.0) u += kTwoPi;
  return u > 0.0 && u < t - s;
}

double bs_U(const ArcSpec& a, double x) {
  const double c = a.scale();
  return 0.5 * (bs_H_fast(c * (x - a.s)) + bs_H_fast(c * (a.t - x)));
}

double bs_Kst(const ArcSpec& a, double x) {
  const double c = a.scale();
  return 0.5 * (bs_K(c * (x - a.s)) + bs_K(c * (a.t - x)));
}

Complex bs_E_transform(double omega, double* quad_tail) {
  const DTable& d = d_table();
  double acc = 0.0, comp = 0.0;
  for (std::size_t k = 0; k < d.y.size(); ++k) {
    // Kahan summation; the integrand oscillates slowly and the terms are small
    const double term = d.wd[k] * std::sin(omega * d.y[k]) - comp;
    const double next = acc + term;
    comp = (next - acc) - term;
    acc = next;
  }
  // |D(y)| <= 1.05 / (3 pi^2 y^3) beyond Y
  if (quad_tail) *quad_tail = 2.0 * 1.05 / (6.0 * kPi2 * DTable::Y * DTable::Y);
  return Complex(0.0, -2.0 * acc);
}

Complex bs_U_transform(const ArcSpec& a, double xi) {
  a.validate();
  if (xi == 0.0) return a.t - a.s;
  const double c = a.scale();
  const Complex diff = std::polar(1.0, -a.s * xi) - std::polar(1.0, -a.t * xi);
  return diff * (1.0 / Complex(0.0, xi) + bs_E_transform(xi / c) / (2.0 * c));
}

Complex bs_K_transform(const ArcSpec& a, double xi) {
  a.validate();
  const double tri = std::max(0.0, 1.0 - std::abs(xi) / a.Delta);
  return (kPi / a.Delta) * tri * (std::polar(1.0, -a.s * xi) + std::polar(1.0, -a.t * xi));
}

Complex TrigPoly::eval(double theta) const {
  // z^m by repeated multiplication from both ends of the range
  const Complex z = std::polar(1.0, theta);
  const Complex zi = std::conj(z);
  Complex acc = coeff(0), p = 1.0, q = 1.0;
  for (int m = 1; m <= degree; ++m) {
    p *= z;
    q *= zi;
    acc += coeff(m) * p + coeff(-m) * q;
  }
  return acc;
}

FourierCoeffs fourier_coeffs(const ArcSpec& a) {
  a.validate();
  FourierCoeffs fc;
  fc.degree = a.degree();
  const int n = 2 * fc.degree + 1;
  fc.U.resize(n);
  fc.K.resize(n);
  par::parallel_for(n, [&](std::ptrdiff_t i) {
    const double m = double(i - fc.degree);
    fc.U[i] = bs_U_transform(a, m);
    fc.K[i] = bs_K_transform(a, m);
  });
  bs_E_transform(0.0, &fc.quad_tail);
  fc.quad_tail /= 2.0 * a.scale();
  return fc;
}

Periodized periodized(const FourierCoeffs& fc) {
  Periodized p;
  p.U.degree = p.K.degree = fc.degree;
  p.U.c.resize(fc.U.size());
  p.K.c.resize(fc.K.size());
  for (std::size_t i = 0; i < fc.U.size(); ++i) {
    p.U.c[i] = fc.U[i] / kTwoPi;
    p.K.c[i] = fc.K[i] / kTwoPi;
  }
  return p;
}

Periodized periodized(const ArcSpec& a) { return periodized(fourier_coeffs(a)); }

double periodized_U_spatial(const ArcSpec& a, double theta, int kmax) {
  CompensatedSum acc;
  for (int k = -kmax; k <= kmax; ++k) acc.add(bs_U(a, theta + k * kTwoPi));
  return acc.value().real();
}

double periodized_K_spatial(const ArcSpec& a, double theta, int kmax) {
  CompensatedSum acc;
  for (int k = -kmax; k <= kmax; ++k) acc.add(bs_Kst(a, theta + k * kTwoPi));
  // K decays only like y^{-2}. For integral Delta the factor sin^2 is the same
  // for every k, so the remainder over |k| > kmax is a pair of trigamma values.
  if (a.Delta == std::floor(a.Delta)) {
    const double c = a.scale();
    for (double y0 : {c * (theta - a.s), c * (a.t - theta)}) {
      const double sp = std::sin(kPi * (y0 - std::nearbyint(y0)));
      const double r = y0 / a.Delta;
      const double tail = boost::math::trigamma(kmax + 1.0 + r) + boost::math::trigamma(kmax + 1.0 - r);
      acc.add(0.5 * sp * sp / (kPi2 * a.Delta * a.Delta) * tail);
    }
  }
  return acc.value().real();
}

Lemma51Report lemma51_check(const std::vector<ArcSpec>& arcs, long samples, std::uint64_t seed) {
  if (arcs.empty()) throw DomainError("lemma51_check: need at least one arc");
  for (const auto& a : arcs) {
    a.validate();
    if (a.Delta != arcs.front().Delta) throw DomainError("lemma51_check: arcs must share Delta");
  }
  if (samples < 1) throw DomainError("lemma51_check: need samples >= 1");
  std::vector<Periodized> polys;
  std::vector<double> err;  // bound on |U_num - U| per arc from the truncated transform integral
  for (const auto& a : arcs) {
    FourierCoeffs fc = fourier_coeffs(a);
    polys.push_back(periodized(fc));
    const double n = double(fc.U.size());
    err.push_back(n * (2.0 * fc.quad_tail + 1e-15) / kTwoPi);
  }
  const double logpow = std::pow(std::log(arcs.front().Delta), double(arcs.size()));

  struct Acc {
    double ratio = 0.0, diff = 0.0, floor = 0.0;
    long skipped = 0;
  };
  auto block = [&](std::size_t lo, std::size_t hi) {
    Acc a;
    for (std::size_t i = lo; i < hi; ++i) {
      double ind = 1.0, prodU = 1.0, sumK = 0.0;
      std::vector<double> u(arcs.size());
      for (std::size_t n = 0; n < arcs.size(); ++n) {
        const double th = kTwoPi * uniform01(seed, i, n);
        ind *= arcs[n].contains(th) ? 1.0 : 0.0;
        u[n] = polys[n].U.eval_real(th);
        prodU *= u[n];
        sumK += polys[n].K.eval_real(th);
      }
      // propagated error of the product
      double perr = 0.0;
      for (std::size_t n = 0; n < arcs.size(); ++n) {
        double term = err[n];
        for (std::size_t j = 0; j < arcs.size(); ++j)
          if (j != n) term *= std::abs(u[j]) + err[j];
        perr += term;
      }
      const double d = std::abs(ind - prodU);
      a.diff = std::max(a.diff, d);
      a.floor = std::max(a.floor, perr);
      if (sumK < 1e-15) {
        ++a.skipped;
        continue;
      }
      a.ratio = std::max(a.ratio, std::max(0.0, d - perr) / (logpow * sumK));
    }
    return a;
  };
  auto combine = [](Acc x, const Acc& y) {
    x.ratio = std::max(x.ratio, y.ratio);
    x.diff = std::max(x.diff, y.diff);
    x.floor = std::max(x.floor, y.floor);
    x.skipped += y.skipped;
    return x;
  };
  Acc acc = par::blocked_reduce(static_cast<std::size_t>(samples), 256, Acc{}, block, combine);
  Lemma51Report rep;
  rep.max_ratio = acc.ratio;
  rep.max_abs_diff = acc.diff;
  rep.numerical_floor = acc.floor;
  rep.samples = samples;
  rep.skipped = acc.skipped;
  return rep;
}

}  // namespace hurlab
