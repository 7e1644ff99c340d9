#include <random>

#include "doctest.h"
#include "hurlab/bselberg.hpp"
#include "hurlab/quadrature.hpp"

using namespace hurlab;

namespace {

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// Vaaler's closed form: H^(t) = 2 (J(t) - 1)/(i 2 pi t) type identity rewritten
// for E = H - sgn, with J(t) = pi t (1 - |t|) cot(pi t) + |t| on |t| < 1.
Complex vaaler_E_transform(double omega) {
  const double t = omega / kTwoPi;
  const double at = std::abs(t);
  const double J = at < 1.0 ? kPi * at * (1.0 - at) / std::tan(kPi * at) + at : 0.0;
  return 2.0 * (J - 1.0) / Complex(0.0, omega);
}

}  // namespace

TEST_CASE("K at the origin and integers") {
  CHECK(bs_K(0.0) == 1.0);
  for (int m = 1; m < 5; ++m) CHECK(bs_K(double(m)) < 1e-30);
  CHECK(bs_H(0.0) == 0.0);
}

TEST_CASE("sign sandwich") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  long viol = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    double tail = 0.0;
    const double h = bs_H(x, &tail);
    if (std::abs(sgn(x) - h) > bs_K(x) + 1e-12) ++viol;
    if (std::abs(h) > 1.0 + 1e-12) ++viol;
    CHECK(tail <= 2.0 * std::abs(x) / (0.98 * 1e6));
  }
  CHECK(viol == 0);
}

TEST_CASE("fast H agrees with the series") {
  for (double x : {-37.3, -2.5, -1.0, -0.3, 1e-7, 0.5, 1.0, 3.75, 49.9, 400.2}) CHECK(std::abs(bs_H_fast(x) - bs_H(x)) < 1e-12);
}

TEST_CASE("interval sandwich") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (double D : {4.0, 10.0, 100.0}) {
    const ArcSpec a{-1.0, 2.0, D};
    long viol = 0;
    for (int i = 0; i < 10000; ++i) {
      const double x = u(rng);
      const double ind = (x > a.s && x < a.t) ? 1.0 : 0.0;
      if (std::abs(ind - bs_U(a, x)) > bs_Kst(a, x) + 1e-12) ++viol;
    }
    CHECK(viol == 0);
  }
}

TEST_CASE("mass of K_{s,t}") {
  for (double D : {10.0, 100.0}) {
    const ArcSpec a{0.0, 1.5, D};
    const double X = 2000.0;
    const Rule1D r = composite_gauss(-X, X, static_cast<int>(2 * X * D / kTwoPi), 16);
    const double q = integrate(r, [&](double x) { return bs_Kst(a, x); });
    // sin^2 averages to 1/2 beyond X
    const double c = a.scale();
    const double tail = 2.0 / (kPi * kPi * c * c * X) * 0.5;
    CHECK(std::abs(q + tail - kTwoPi / D) < 1e-6);
  }
}

TEST_CASE("U tends to 1 away from the endpoints") {
  const ArcSpec a{0.0, 2.0, 1000.0};
  CHECK(std::abs(bs_U(a, 1.0) - 1.0) < 1e-3);
  CHECK(std::abs(bs_U(a, 5.0)) < 1e-3);
}

TEST_CASE("E transform against Vaaler's formula") {
  for (double w : {0.3, 1.0, 2.5, 4.0, 6.0, 6.2}) {
    double tail = 0.0;
    const Complex e = bs_E_transform(w, &tail);
    CHECK(std::abs(e - vaaler_E_transform(w)) < 1e-9);
    CHECK(tail < 1e-6);
  }
}

TEST_CASE("Fourier transform of U") {
  for (double D : {10.0, 100.0, 1000.0}) {
    const ArcSpec a{0.5, 0.5 + kTwoPi * 0.3, D};
    const double U0 = bs_U_transform(a, 0.0).real();
    CHECK(std::abs(U0 - kTwoPi * 0.3) <= 10.0 / D);
    CHECK(std::abs(bs_U_transform(a, 1.2 * D)) < 1e-6);
    CHECK(std::abs(bs_K_transform(a, 1.2 * D)) == 0.0);
    CHECK(std::abs(bs_K_transform(a, 0.0) - kTwoPi / D) < 1e-14);
  }
}

TEST_CASE("Fourier coefficients decay like 1/m with a stable constant") {
  std::vector<double> C;
  for (double D : {10.0, 100.0, 1000.0}) {
    const ArcSpec a{0.5, 0.5 + kTwoPi * 0.3, D};
    const FourierCoeffs fc = fourier_coeffs(a);
    double c = 0.0;
    for (int m = 1; m <= fc.degree; ++m) c = std::max(c, m * std::abs(fc.U[m + fc.degree]));
    C.push_back(c);
    for (int m = 1; m <= fc.degree; ++m) {
      CHECK(std::abs(fc.U[fc.degree + m] - std::conj(fc.U[fc.degree - m])) < 1e-13);
      CHECK(std::abs(fc.K[fc.degree + m] - std::conj(fc.K[fc.degree - m])) < 1e-15);
    }
  }
  for (double c : C) {
    CHECK(c > 1.0);
    CHECK(c < 3.0);
  }
  CHECK(C[2] / C[1] < 1.5);
  CHECK(C[1] / C[2] < 1.5);
}

TEST_CASE("periodizations") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (double D : {10.0, 100.0, 1000.0}) {
    const ArcSpec a{1.0, 1.0 + kTwoPi * 0.3, D};
    const Periodized P = periodized(a);
    CHECK(P.U.degree == static_cast<int>(D));
    long viol = 0;
    double route = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double th = u(rng);
      const double U = P.U.eval_real(th), K = P.K.eval_real(th);
      CHECK(std::abs(P.U.eval(th).imag()) < 1e-12);
      if (K < -1e-12) ++viol;
      if (std::abs((a.contains(th) ? 1.0 : 0.0) - U) > K + 1e-9) ++viol;
      if (i < 200) {
        route = std::max(route, std::abs(U - periodized_U_spatial(a, th)));
        route = std::max(route, std::abs(K - periodized_K_spatial(a, th)));
      }
    }
    CHECK(viol == 0);
    CHECK(route < 1e-6);
  }
}

TEST_CASE("arc membership wraps mod 2 pi") {
  const ArcSpec a{5.0, 7.0, 10.0};
  CHECK(a.contains(6.0));
  CHECK(a.contains(0.5));  // 0.5 + 2 pi lies in (5, 7)
  CHECK_FALSE(a.contains(2.0));
  CHECK_THROWS_AS((ArcSpec{0.0, 7.0, 10.0}.validate()), DomainError);
  CHECK_THROWS_AS((ArcSpec{0.0, 1.0, 2.0}.validate()), DomainError);
}

TEST_CASE("product approximation on the torus") {
  for (double D : {10.0, 100.0, 1000.0}) {
    const Lemma51Report one = lemma51_check({ArcSpec{0.5, 0.5 + kTwoPi * 0.3, D}}, 2000, 5);
    CHECK(one.max_ratio <= 1.0 + 1e-6);
    std::vector<ArcSpec> arcs;
    for (int j = 0; j < 3; ++j) arcs.push_back({0.5 + 2.0 * j, 0.5 + 2.0 * j + kTwoPi * 0.3, D});
    const Lemma51Report three = lemma51_check(arcs, 2000, 5);
    CHECK(three.max_ratio <= 10.0);
    CHECK(three.samples == 2000);
  }
  CHECK_THROWS_AS(lemma51_check({ArcSpec{0, 1, 10}, ArcSpec{0, 1, 20}}, 10, 1), DomainError);
}

TEST_CASE("product approximation deep inside the arcs") {
  const double D = 1000.0;
  std::vector<ArcSpec> arcs;
  for (int j = 0; j < 3; ++j) arcs.push_back({0.5 + 2.0 * j, 0.5 + 2.0 * j + kTwoPi * 0.3, D});
  std::vector<Periodized> P;
  for (const auto& a : arcs) P.push_back(periodized(a));
  for (double f : {0.3, 0.4, 0.5, 0.6, 0.7}) {
    double prod = 1.0;
    for (std::size_t j = 0; j < arcs.size(); ++j) prod *= P[j].U.eval_real(arcs[j].s + f * (arcs[j].t - arcs[j].s));
    CHECK(std::abs(1.0 - prod) < 0.1);
  }
}
