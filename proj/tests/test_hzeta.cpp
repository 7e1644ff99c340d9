#include <random>

#include "doctest.h"
#include "hurlab/dirichlet.hpp"
#include "hurlab/hzeta.hpp"

using namespace hurlab;

namespace {

double dist(Complex a, Complex b) { return std::abs(a - b); }

Complex random_s(std::mt19937_64& rng, double slo, double shi, double tlo, double thi) {
  std::uniform_real_distribution<double> us(slo, shi), ut(tlo, thi);
  return {us(rng), ut(rng)};
}

// partial sums to M terms plus the first Euler-Maclaurin corrections
Complex direct_series(Complex s, double alpha, long M) {
  CompensatedSum acc;
  for (long n = M - 1; n >= 0; --n) acc.add(std::pow(n + alpha, -s));
  const double x = M + alpha;
  return acc.value() + std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
}

}  // namespace

TEST_CASE("Basel value") {
  CHECK(dist(hurwitz(2.0, 1.0), kPi * kPi / 6.0) < 1e-10);
  CHECK(dist(hurwitz(4.0, 1.0), std::pow(kPi, 4) / 90.0) < 1e-10);
}

TEST_CASE("alpha = 1/2 identity at random points") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Complex s = random_s(rng, -1.0, 3.0, -200.0, 200.0);
    if (std::abs(s - 1.0) < 0.05) continue;
    const Complex lhs = hurwitz(s, 0.5);
    const Complex rhs = (std::pow(2.0, s) - 1.0) * hurwitz(s, 1.0);
    CHECK(dist(lhs, rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("reference values") {
  // mpmath.zeta(s, a) at 30 digits
  struct Ref {
    Complex s;
    double a;
    Complex v;
  };
  const Ref refs[] = {
      {{0.75, 10.0}, 1.0 / 3.0, {-0.90720554406492895, -2.8287411337345819}},
      {{0.6, 30.0}, 0.2, {-0.53588889956297531, -0.18650110083856324}},
      {{0.5, 100.0}, std::sqrt(2.0) - 1.0, {-0.017665010408978829, 1.305488029501052}},
      {{-0.5, 3.0}, 0.7, {0.0048054894623615968, 0.4114998412688718}},
      {{0.8, 1000.0}, 0.9, {0.69632636866311738, -1.4043970969468307}},
  };
  for (const auto& r : refs) {
    const EvalResult e = hurwitz_eval(r.s, r.a);
    CHECK(dist(e.value, r.v) < 1e-11);
    CHECK(e.error_bound < 1e-12);
    CHECK_FALSE(e.out_of_range);
  }
}

TEST_CASE("rational decomposition at q = 3") {
  const Complex s{0.75, 10.0};
  const CharacterGroup G(3);
  REQUIRE(G.order() == 2);
  const Complex L0 = dirichlet_L(s, G, 0), L1 = dirichlet_L(s, G, 1);
  const Complex rhs = std::pow(3.0, s) / 2.0 * (L0 + L1);
  CHECK(dist(hurwitz(s, 1.0 / 3.0), rhs) < 1e-10);
}

TEST_CASE("rational decomposition for q <= 7") {
  std::mt19937_64 rng(2);
  for (int q = 2; q <= 7; ++q) {
    for (int a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      for (int i = 0; i < 20; ++i) {
        const Complex s = random_s(rng, 0.5, 1.0, -100.0, 100.0);
        CHECK(dist(hurwitz(s, double(a) / q), rational_decomposition(s, a, q)) < 1e-8);
      }
    }
  }
}

TEST_CASE("character tables") {
  for (int q : {3, 4, 5, 7, 8, 9, 12, 15}) {
    const CharacterGroup G(q);
    CHECK(G.order() == euler_phi(q));
    // orthogonality over a
    for (int i = 0; i < G.order(); ++i)
      for (int j = 0; j < G.order(); ++j) {
        Complex acc(0.0, 0.0);
        for (int a = 0; a < q; ++a) acc += G.value(i, a) * std::conj(G.value(j, a));
        CHECK(dist(acc, i == j ? double(G.order()) : 0.0) < 1e-12);
      }
    // multiplicativity
    for (int j = 0; j < G.order(); ++j)
      for (int a = 1; a < q; ++a)
        for (int b = 1; b < q; ++b) CHECK(dist(G.value(j, a * b % q), G.value(j, a) * G.value(j, b)) < 1e-12);
  }
}

TEST_CASE("conjugation symmetry") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.05, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Complex s = random_s(rng, -1.0, 2.0, 0.5, 500.0);
    const double a = ua(rng);
    CHECK(dist(hurwitz(std::conj(s), a), std::conj(hurwitz(s, a))) < 1e-12 * std::max(1.0, std::abs(hurwitz(s, a))));
  }
}

TEST_CASE("series consistency for sigma > 1.5") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ua(0.05, 1.0);
  for (int i = 0; i < 10; ++i) {
    const Complex s = random_s(rng, 1.6, 3.0, -50.0, 50.0);
    const double a = ua(rng);
    CHECK(dist(hurwitz(s, a), direct_series(s, a, 100000)) < 1e-8);
  }
}

TEST_CASE("pole and non-finite input") {
  CHECK_THROWS_AS(hurwitz(1.0, 0.5), PoleError);
  CHECK_THROWS_AS(hurwitz(Complex(NAN, 0.0), 0.5), DomainError);
  CHECK(hurwitz_eval({0.7, 2e5}, 0.5).out_of_range);
  CHECK(hurwitz_eval({-2.0, 1.0}, 0.5).out_of_range);
}

TEST_CASE("approximate functional equation") {
  {
    const AfeResult r = hurwitz_afe(0.75, 50.0, 1.0 / 3.0, 100.0);
    CHECK(r.bound == doctest::Approx(10.0 * std::pow(100.0, -0.75)));
    CHECK(dist(r.value, hurwitz({0.75, 50.0}, 1.0 / 3.0)) <= r.bound);
  }
  {
    const AfeResult r = hurwitz_afe(0.9, kTwoPi, 1.0, 50.0);
    CHECK(dist(r.value, hurwitz({0.9, kTwoPi}, 1.0)) <= r.bound);
  }
  CHECK_THROWS_AS(hurwitz_afe(0.75, 5.0, 0.5, 100.0), DomainError);
  CHECK_THROWS_AS(hurwitz_afe(0.75, 400.0, 0.5, 100.0), DomainError);
  CHECK_THROWS_AS(hurwitz_afe(0.4, 50.0, 0.5, 100.0), DomainError);
}

TEST_CASE("derivative n = 0 is the value") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const Complex s = random_s(rng, 0.55, 0.95, 0.0, 100.0);
    CHECK(dist(derivative(0, s, 0.3), hurwitz(s, 0.3)) < 1e-8);
  }
}

TEST_CASE("first derivative against difference quotients") {
  const Complex s0 = 0.75;
  const auto f = [](double x) { return hurwitz(x, 1.0); };
  const auto cd = [&](double h) { return (f(0.75 + h) - f(0.75 - h)) / (2.0 * h); };
  // Richardson extrapolation of the central difference
  const Complex rich = (4.0 * cd(5e-5) - cd(1e-4)) / 3.0;
  const Complex d1 = derivative(1, s0, 1.0);
  CHECK(dist(d1, rich) < 1e-6);
  CHECK(dist(d1, -15.9248319286904863632) < 1e-11);  // mpmath
}

TEST_CASE("second derivative of zeta(s, 1/2) by the product rule") {
  const Complex s{0.7, 2.0};
  const auto z = derivatives(2, s, 1.0);
  const double l2 = std::log(2.0);
  const Complex p = std::pow(2.0, s);
  const Complex rhs = p * l2 * l2 * z[0] + 2.0 * p * l2 * z[1] + (p - 1.0) * z[2];
  const Complex d2 = derivative(2, s, 0.5);
  CHECK(dist(d2, rhs) < 1e-8);
  CHECK(dist(d2, Complex(0.26000691102317512265, 0.98829077722507794307)) < 1e-9);  // mpmath
}

TEST_CASE("derivatives agree with single derivative calls") {
  const Complex s{0.8, 40.0};
  const auto all = derivatives(4, s, 0.4);
  for (int n = 0; n <= 4; ++n) CHECK(dist(all[n], derivative(n, s, 0.4)) < 1e-9 * std::max(1.0, std::abs(all[n])));
}

TEST_CASE("contour touching the pole") {
  CHECK_THROWS_AS(derivative(1, 0.95, 0.5, 0.1), ContourError);
  CHECK_NOTHROW(derivative(1, 0.95, 0.5));  // default radius stays clear
}

TEST_CASE("line mean values") {
  const LineMean a = line_mean_abs(0.75, 1.0, 500.0, 5000);
  const LineMean b = line_mean_abs(0.75, 1.0, 500.0, 10000);
  CHECK(std::isfinite(a.mean));
  CHECK(std::abs(a.mean - b.mean) < 0.02 * b.mean);
  CHECK(a.bound_shape == doctest::Approx(1.0 / std::sqrt(0.5) + 4.0));

  const LineMean near = line_mean_abs(0.51, 1.0, 500.0, 5000);
  CHECK(near.mean > a.mean);
  CHECK(near.mean < 50.0 / std::sqrt(2.0 * 0.51 - 1.0));

  CHECK_NOTHROW(line_mean_abs(0.7, 0.5, 3.0, 100));
  CHECK_THROWS_AS(line_mean_abs(0.7, 0.5, 2.0, 100), DomainError);
}
