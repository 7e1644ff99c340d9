// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hurlab/bselberg.hpp"
#include "hurlab/census.hpp"
#include "hurlab/dirichlet.hpp"
#include "hurlab/geometry.hpp"
#include "hurlab/hzeta.hpp"
#include "hurlab/qfield.hpp"
#include "hurlab/randmodel.hpp"
#include "hurlab/smoothing.hpp"

using namespace hurlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double max_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = o.pass;
  if (max_seconds > 0.0 && sec > max_seconds) {
    pass = false;
    o.detail += "; over the time limit";
  }
  if (!pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), sec);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

AlgebraicParam golden_quarter() { return make_param(5, 1, 1, 4); }  // (1 + sqrt 5) / 4
AlgebraicParam sqrt2_minus_1() { return make_param(2, -1, 1, 1); }

RelationTuple random_tuple(std::mt19937_64& rng, long n_max) {
  std::uniform_int_distribution<long> n(0, n_max), m(-3, 3), len(2, 4);
  RelationTuple t;
  const long k = len(rng);
  while (static_cast<long>(t.size()) < k) {
    const long nn = n(rng), mm = m(rng);
    if (mm == 0) continue;
    bool dup = false;
    for (const auto& p : t) dup |= p.first == nn;
    if (!dup) t.emplace_back(nn, mm);
  }
  return t;
}

// Independent sup of |zeta(s + i tau) - (s - sigma0)| on a dense circle.
double circle_sup(double alpha, double tau, double sigma0, double r, int points) {
  double sup = 0.0;
  for (int j = 0; j < points; ++j) {
    const Complex s = sigma0 + std::polar(r, kTwoPi * (j + 0.5) / points);
    sup = std::max(sup, std::abs(hurwitz(s + Complex(0.0, tau), alpha) - (s - sigma0)));
  }
  return sup;
}

RectDomainU tall_rect(int N) {
  RectDomainU U{0.6, 0.9, 0.0, 8.0 * (N + 1)};
  U.sigma_order = 8;
  U.t_panels = 4 * (N + 1);
  return U;
}

}  // namespace

int main() {
  criterion(1, "rational decomposition", 60.0, [] {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> us(0.5, 1.0), ut(-100.0, 100.0);
    double worst = 0.0;
    long n = 0;
    for (int q : {3, 5, 7})
      for (int a = 1; a < q; ++a)
        for (int i = 0; i < 20; ++i) {
          Complex s(us(rng), ut(rng));
          if (s.real() == 0.5) s += 1e-9;
          worst = std::max(worst, std::abs(hurwitz(s, double(a) / q) - rational_decomposition(s, a, q)));
          ++n;
        }
    return Outcome{worst < 1e-8, fmt("max error %.2e over %.0f points (limit 1e-8)", worst, double(n))};
  });

  criterion(2, "contour identity residual", 120.0, [] {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double sigma = 0.55 + 0.45 * u(rng), t = -50.0 + 100.0 * u(rng);
      const double alpha = 0.05 + 0.95 * u(rng);
      const long N = 10 + static_cast<long>(190.0 * u(rng));
      const double delta = (sigma - 0.5) / 2.0;
      worst = std::max(worst, lemma34_residual({sigma, t}, alpha, N, delta, 80.0).residual);
    }
    return Outcome{worst < 1e-5, fmt("max residual %.2e at v_cutoff 80 over 10 configurations (limit 1e-5)", worst)};
  });

  criterion(3, "moments of the X model", 60.0, [] {
    const AlgebraicParam a = sqrt2_minus_1();
    const MomentEstimate rel = moment_estimate(Variant::X, a, {{0, 1}, {2, 1}}, 100000, 303);
    bool ok = rel.mean == Complex(1.0, 0.0);
    std::mt19937_64 rng(303);
    int tested = 0, outside = 0;
    double worst = 0.0;
    while (tested < 20) {
      const RelationTuple t = random_tuple(rng, 30);
      if (detect_relation(a, t)) continue;
      const MomentEstimate m = moment_estimate(Variant::X, a, t, 100000, 1000 + tested);
      const double z = std::abs(m.mean) / m.std_error;
      worst = std::max(worst, z);
      if (!(std::abs(m.mean) < 3.0 * m.std_error)) ++outside;
      ++tested;
    }
    ok = ok && outside == 0;
    return Outcome{ok, std::string(rel.mean == Complex(1.0, 0.0) ? "relation mean is 1" : "relation mean is not 1") +
                           fmt("; max |mean|/stderr %.2f over 20 tuples (limit 3)", worst)};
  });

  criterion(4, "torus Fourier bound", 0.0, [] {
    const AlgebraicParam a = golden_quarter(), b = sqrt2_minus_1();
    std::mt19937_64 rng(404);
    long viol = 0, cases = 0;
    double worst = 0.0;
    int tuples = 0;
    while (tuples < 50) {
      const RelationTuple t = random_tuple(rng, 40);
      if (detect_relation(a, t)) continue;
      ++tuples;
      for (double T : {10.0, 100.0, 1000.0}) {
        const TorusFourier g = torus_fourier(a, t, T);
        const double bound = 2.0 / (std::abs(g.delta) * T);
        worst = std::max(worst, std::abs(g.value) / bound);
        if (g.relation || std::abs(g.value) > bound) ++viol;
        ++cases;
      }
    }
    bool rel_ok = true;
    for (const RelationTuple& t : {RelationTuple{{0, 1}, {2, 1}}, RelationTuple{{1, 1}, {2, 1}, {3, -1}},
                                   RelationTuple{{0, 2}, {2, 2}}})
      for (double T : {10.0, 100.0, 1000.0}) rel_ok = rel_ok && torus_fourier(b, t, T).value == Complex(1.0, 0.0);
    return Outcome{viol == 0 && rel_ok,
                   fmt("%.0f violations in %.0f cases, max |g|/bound %.3f", double(viol), double(cases), worst) +
                       (rel_ok ? "; relation tuples give 1" : "; relation tuple not 1")};
  });

  criterion(5, "Beurling-Selberg sandwich", 0.0, [] {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> ux(-50.0, 50.0), uarc(0.1, kTwoPi);
    long vh = 0, vu = 0;
    for (int i = 0; i < 10000; ++i) {
      const double x = ux(rng);
      const double h = bs_H(x);
      const double sg = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
      if (std::abs(sg - h) > bs_K(x) + 1e-12 || std::abs(h) > 1.0 + 1e-12) ++vh;
    }
    for (double D : {10.0, 100.0, 1000.0}) {
      const ArcSpec a{-1.0, -1.0 + uarc(rng), D};
      std::uniform_real_distribution<double> u(a.s - 3.0, a.t + 3.0);
      for (int i = 0; i < 10000; ++i) {
        const double x = u(rng);
        const double ind = (x > a.s && x < a.t) ? 1.0 : 0.0;
        if (std::abs(ind - bs_U(a, x)) > bs_Kst(a, x) + 1e-12) ++vu;
      }
    }
    double worst = 0.0;
    bool u0_ok = true;
    for (double D : {10.0, 100.0, 1000.0}) {
      const double length = kTwoPi * 0.3;
      const ArcSpec a{0.4, 0.4 + length, D};
      const double err = std::abs(bs_U_transform(a, 0.0).real() - length);
      worst = std::max(worst, err * D);
      u0_ok = u0_ok && err <= 10.0 / D;
    }
    return Outcome{vh == 0 && vu == 0 && u0_ok,
                   fmt("H violations %.0f, U violations %.0f, max Delta |U~(0) - length| %.3f (limit 10)", double(vh),
                       double(vu), worst)};
  });

  criterion(6, "Omega_0 independence shadow", 300.0, [] {
    const AlgebraicParam g = golden_quarter();
    const bool no_rel = !detect_relation(g, {{0, 1}, {1, 1}}) && analyze_relations(g, 3).kernel.empty();
    const Omega0Report a = omega0_experiment(g, 3, 0.3, 1000000, 606);
    const Omega0Report b = omega0_experiment(sqrt2_minus_1(), 3, 0.3, 1000000, 606);
    const bool ok = no_rel && std::abs(a.z_score) < 3.0 && std::abs(b.z_score) > 5.0;
    return Outcome{ok, fmt("golden P %.5f vs 0.0081 (z %.2f); sqrt 2 - 1 z %.1f", a.p_hat, a.z_score, b.z_score) +
                           (no_rel ? "" : "; golden alpha has a relation")};
  });

  criterion(7, "zero census", 600.0, [] {
    RectContour r1{0.6, 0.9, 0.0, 50.0};
    const CensusReport z1 = count_zeros(1.0, r1);
    r1.refine = 1;
    const CensusReport z1r = count_zeros(1.0, r1);
    RectContour r2{0.55, 0.95, 0.0, 200.0};
    const CensusReport z2 = locate_zeros(0.2, r2);
    r2.refine = 1;
    const CensusReport z2r = count_zeros(0.2, r2);
    double best = INFINITY;
    for (const auto& z : z2.zeros)
      if (z.converged) best = std::min(best, z.abs_value);
    const bool ok = z1.count == 0 && z1.integrality_error < 1e-3 && z1r.count == 0 && z2.count >= 1 && best < 1e-8 &&
                    z2r.count == z2.count;
    return Outcome{ok, fmt("alpha 1: %.0f zeros, residual %.1e", double(z1.count), z1.integrality_error) +
                           fmt("; alpha 1/5: %.0f zeros (refined %.0f), min |zeta| %.1e", double(z2.count),
                               double(z2r.count), best)};
  });

  criterion(8, "Rouche pipeline", 0.0, [] {
    struct Planted {
      double alpha;
      Complex zero;
      double r;
    };
    const Planted planted[] = {{0.87, {0.896348, 86.596908}, 0.0518},
                               {0.69, {0.573181, 16.937029}, 0.0366},
                               {0.97, {0.592781, 29.948520}, 0.0464},
                               {0.99, {0.653631, 75.413901}, 0.0768}};
    int planted_ok = 0;
    for (const auto& p : planted) {
      const double sigma0 = p.zero.real();
      ShiftOptions opt;
      opt.tau_lo = p.zero.imag() - 0.1;
      opt.tau_step = 0.001;
      const ShiftSearchResult s = shift_search(p.alpha, ShiftDomain::disc({sigma0, 0.0}, p.r),
                                               [sigma0](Complex z) { return z - sigma0; }, "linear", 0.75 * p.r,
                                               p.zero.imag() + 0.1, opt);
      if (s.passing.empty()) continue;
      const RoucheCertificate c = rouche_localize(p.alpha, s.best.tau, sigma0, p.r);
      const Complex rel = c.zero - Complex(sigma0, s.best.tau);
      if (c.issued && c.zero_inside && std::abs(rel) < p.r && c.zero_abs < 1e-10) ++planted_ok;
    }
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int refusals = 0, false_certs = 0;
    while (refusals < 1000) {
      const double alpha = 0.1 + 0.9 * u(rng), sigma0 = 0.55 + 0.4 * u(rng), tau = 200.0 * u(rng);
      const double r = (0.05 + 0.9 * u(rng)) * std::min(sigma0 - 0.5, 1.0 - sigma0);
      const double sup = circle_sup(alpha, tau, sigma0, r, 2048);
      const RoucheCertificate c = rouche_localize(alpha, tau, sigma0, r);
      if (sup < r) continue;
      ++refusals;
      if (c.issued) ++false_certs;
    }
    return Outcome{planted_ok == 4 && false_certs == 0,
                   fmt("planted certificates %.0f of 4; false certificates %.0f in %.0f refusal cases", planted_ok,
                       double(false_certs), double(refusals))};
  });

  criterion(9, "gamma_fit planted recovery", 0.0, [] {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    long nonmono = 0;
    for (int k = 0; k < 20; ++k) {
      const int N = 4 + static_cast<int>(std::lround(124.0 * k / 19.0));
      const double alpha = 0.05 + 0.95 * u(rng);
      auto g = make_grid(tall_rect(N));
      GridFunction f;
      f.grid = g;
      f.values.assign(g->nodes.size(), Complex(0.0, 0.0));
      for (int n = 0; n <= N; ++n) {
        const GridFunction x = GridFunction::dirichlet_term(g, alpha, n);
        const Complex c = std::polar(1.0, kTwoPi * u(rng));
        for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += c * x.values[i];
      }
      const GammaFitResult r = gamma_fit(f, alpha, N);
      worst = std::max(worst, r.residual);
      for (std::size_t i = 1; i < r.history.size(); ++i)
        if (r.history[i] > r.history[i - 1]) ++nonmono;
    }
    return Outcome{worst < 1e-8 && nonmono == 0,
                   fmt("max residual %.2e (limit 1e-8), monotonicity violations %.0f", worst, double(nonmono))};
  });

  criterion(10, "perturbation bound", 0.0, [] {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const RectDomainU U{0.6, 0.9, 0.0, 1.0};
    auto g = make_grid(U);
    long viol = 0;
    double worst = 0.0, mismatch = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double c = 0.02 + 0.96 * u(rng);
      const double rho = u(rng) * std::min(c, 1.0 - c) / 2.0;
      const int N = 1 + static_cast<int>(200.0 * u(rng));
      std::vector<Complex> gamma(N + 1);
      for (auto& z : gamma) z = std::polar(1.0, kTwoPi * u(rng));
      const PerturbationBound p = perturbation_bound(c, rho, g, gamma);
      // oracle: direct grid norm and closed-form right side
      std::vector<Complex> diff(g->nodes.size(), Complex(0.0, 0.0));
      for (int n = 0; n <= N; ++n)
        for (std::size_t i = 0; i < diff.size(); ++i)
          diff[i] += gamma[n] * (std::exp(-g->nodes[i] * std::log(n + c + rho)) - std::exp(-g->nodes[i] * std::log(n + c)));
      double lhs2 = 0.0;
      for (std::size_t i = 0; i < diff.size(); ++i) lhs2 += g->weights[i] * std::norm(diff[i]);
      const double lhs = std::sqrt(lhs2);
      const double rhs = rho * std::sqrt(U.abs_s2_integral()) * hurwitz(1.5, c / 2.0).real();
      mismatch = std::max({mismatch, std::abs(lhs - p.lhs), std::abs(rhs - p.rhs)});
      if (lhs > rhs || p.lhs > p.rhs) ++viol;
      if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
    }
    return Outcome{viol == 0 && mismatch < 1e-9,
                   fmt("violations %.0f of 50, max lhs/rhs %.3f, oracle mismatch %.1e", double(viol), worst, mismatch)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
