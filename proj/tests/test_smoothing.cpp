#include <random>

#include "doctest.h"
#include "hurlab/hzeta.hpp"
#include "hurlab/smoothing.hpp"

using namespace hurlab;

TEST_CASE("phi profile") {
  CHECK(phi(0.0) == 1.0);
  CHECK(phi(0.7) == 1.0);
  CHECK(phi(1.0) == 1.0);
  CHECK(phi(2.0) == 0.0);
  CHECK(phi(2.5) == 0.0);
  const double m = phi(1.5);
  CHECK(m > 0.0);
  CHECK(m < 1.0);
  double prev = 1.0;
  for (int i = 1; i <= 100; ++i) {
    const double v = phi(1.0 + i / 100.0);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK(phi_third_l1() > 0.0);
}

TEST_CASE("Mellin transform at w = 1 against direct quadrature") {
  // composite Simpson on [0, 2]
  const int n = 20000;
  double acc = phi(0.0) + phi(2.0);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * phi(2.0 * i / n);
  const double direct = acc * (2.0 / n) / 3.0;
  CHECK(std::abs(phi_mellin(1.0).value - direct) < 1e-9);
}

TEST_CASE("Mellin pole has residue 1") {
  const MellinValue m = phi_mellin(1e-3);
  CHECK(m.near_pole);
  CHECK(std::abs(m.value * 1e-3 - 1.0) < 1e-2);
  for (int k = 0; k < 20; ++k) {
    const double th = -kPi + kTwoPi * (k + 0.5) / 20.0;
    double prev = 1.0;
    for (double r : {1e-2, 1e-3, 1e-4, 1e-5}) {
      const Complex w = std::polar(r, th);
      const MellinValue v = phi_mellin(w);
      const double err = std::abs(w * v.value - 1.0);
      CHECK(err < 0.05);
      CHECK(err <= prev * 1.0001);
      prev = err;
    }
  }
  CHECK_THROWS_AS(phi_mellin(0.0), PoleError);
  CHECK_THROWS_AS(phi_mellin(Complex(-1.0, 3.0)), DomainError);
}

TEST_CASE("Mellin transform decays") {
  const double a = std::abs(phi_mellin({-0.1, 10.0}).value);
  const double b = std::abs(phi_mellin({-0.1, 20.0}).value);
  CHECK(b / a < std::pow(21.0 / 11.0, -3.0));
  for (double v : {5.0, 10.0, 40.0, 100.0}) {
    const Complex w{-0.2, v};
    CHECK(std::abs(phi_mellin(w).value) <= phi_mellin_bound(w));
  }
}

TEST_CASE("smoothed sums") {
  const Complex s = 0.75;
  const Complex expect = std::pow(0.5, -s) * phi(0.5) + std::pow(1.5, -s) * phi(1.5);
  CHECK(std::abs(smoothed_sum(s, 0.5, 1) - expect) < 1e-15);

  const Complex s2{1.7, 3.0};
  CHECK(std::abs(smoothed_sum(s2, 0.3, 10000) - hurwitz(s2, 0.3)) < 1e-3);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Complex z{0.5 + u(rng), 100.0 * u(rng)};
    const double a = 0.05 + 0.95 * u(rng);
    CHECK(std::abs(smoothed_sum(std::conj(z), a, 37) - std::conj(smoothed_sum(z, a, 37))) < 1e-12);
  }
}

TEST_CASE("contour identity residuals") {
  const Lemma34Result r40 = lemma34_residual(0.8, 1.0 / 3.0, 50, 0.1, 40.0);
  CHECK(r40.residual < 1e-6);
  const Lemma34Result r80 = lemma34_residual(0.8, 1.0 / 3.0, 50, 0.1, 80.0);
  CHECK(r80.residual <= r40.residual + 1e-10);
  CHECK(r80.tail_bound <= r40.tail_bound);
  CHECK(r40.residual <= r40.tail_bound + 1e-10);

  const Lemma34Result q = lemma34_residual({0.6, 5.0}, std::sqrt(2.0) - 1.0, 100, 0.05, 80.0);
  CHECK(q.residual < 1e-5);

  CHECK_THROWS_AS(lemma34_residual(0.8, 0.5, 10, 0.31, 40.0), DomainError);
  CHECK_THROWS_AS(lemma34_residual(0.8, 0.5, 10, 0.0, 40.0), DomainError);
  CHECK_THROWS_AS(lemma34_residual(1.2, 0.5, 10, 0.1, 40.0), DomainError);
}

TEST_CASE("averaged distance to the smoothed sums decreases with N") {
  // T well above the largest N: for tau below ~N the phi^(1 - s) N^{1 - s}
  // term dominates and the average grows with N instead.
  const DistanceTrend tr = distance_trend(std::sqrt(2.0) - 1.0, {10, 50, 250, 1250}, 5000.0, 60, 2, 12);
  REQUIRE(tr.mean_distance.size() == 4);
  for (std::size_t i = 1; i < 4; ++i) CHECK(tr.mean_distance[i] < tr.mean_distance[i - 1]);
}
