#include "hurlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hurlab/hzeta.hpp"
#include "hurlab/parallel.hpp"

namespace hurlab {

namespace {

constexpr int kJ = 12;
// tau values handled per task; the per-task buffers stay small
constexpr std::size_t kTauBlock = 16;

struct SharedFactors {
  long M = 0;
  std::vector<double> logs;  // log(n + alpha), n < M
  std::vector<Complex> a;    // a[j * M + n] = (n + alpha)^{-nodes[j]}
};

SharedFactors prepare(double alpha, const std::vector<Complex>& nodes,
                      const std::vector<double>& taus, double target) {
  double tmax = 0.0;
  for (double t : taus) tmax = std::max(tmax, std::abs(t));
  double imax = 0.0;
  for (Complex z : nodes) imax = std::max(imax, std::abs(z.imag()));
  SharedFactors sf;
  sf.M = euler_maclaurin_terms(tmax + imax);
  auto worst = [&](long M) {
    double b = 0.0;
    for (Complex z : nodes) {
      for (double t : {tmax, -tmax, 0.0})
        b = std::max(b, euler_maclaurin_bound(z + Complex(0.0, t), M + alpha, kJ));
    }
    return b;
  };
  while (worst(sf.M) > target && sf.M < 50'000'000) sf.M += sf.M / 2 + 1;
  sf.logs.resize(sf.M);
  for (long n = 0; n < sf.M; ++n) sf.logs[n] = std::log(n + alpha);
  sf.a.resize(nodes.size() * sf.M);
  for (std::size_t j = 0; j < nodes.size(); ++j)
    for (long n = 0; n < sf.M; ++n) sf.a[j * sf.M + n] = std::exp(-nodes[j] * sf.logs[n]);
  return sf;
}

void check_inputs(double alpha, const std::vector<Complex>& nodes) {
  if (!(alpha > 0.0)) throw DomainError("shift kernel: alpha must be positive");
  for (Complex z : nodes) {
    require_finite(z, "shift kernel");
  }
}

}  // namespace

std::vector<Complex> shift_grid_serial(double alpha, const std::vector<Complex>& nodes,
                                       const std::vector<double>& taus) {
  check_inputs(alpha, nodes);
  std::vector<Complex> out(nodes.size() * taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k)
    for (std::size_t j = 0; j < nodes.size(); ++j)
      out[k * nodes.size() + j] = hurwitz(nodes[j] + Complex(0.0, taus[k]), alpha);
  return out;
}

std::vector<Complex> shift_grid(double alpha, const std::vector<Complex>& nodes,
                                const std::vector<double>& taus, double target_abs_error) {
  check_inputs(alpha, nodes);
  const std::size_t J = nodes.size(), K = taus.size();
  std::vector<Complex> out(J * K);
  if (J == 0 || K == 0) return out;
  const SharedFactors sf = prepare(alpha, nodes, taus, target_abs_error);
  const long M = sf.M;
  const std::ptrdiff_t nblocks = static_cast<std::ptrdiff_t>((K + kTauBlock - 1) / kTauBlock);
  HURLAB_OMP(parallel for schedule(dynamic, 1))
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    std::vector<Complex> e(M);
    const std::size_t lo = static_cast<std::size_t>(b) * kTauBlock;
    const std::size_t hi = std::min(K, lo + kTauBlock);
    for (std::size_t k = lo; k < hi; ++k) {
      const double tau = taus[k];
      for (long n = 0; n < M; ++n) e[n] = std::polar(1.0, -tau * sf.logs[n]);
      for (std::size_t j = 0; j < J; ++j) {
        const Complex* aj = &sf.a[j * M];
        double re = 0.0, im = 0.0;
        for (long n = 0; n < M; ++n) {
          re += aj[n].real() * e[n].real() - aj[n].imag() * e[n].imag();
          im += aj[n].real() * e[n].imag() + aj[n].imag() * e[n].real();
        }
        const Complex s = nodes[j] + Complex(0.0, tau);
        out[k * J + j] = Complex(re, im) + euler_maclaurin_tail(s, M + alpha, kJ);
      }
    }
  }
  return out;
}

std::vector<double> shift_sup_serial(double alpha, const std::vector<Complex>& nodes,
                                     const std::vector<Complex>& targets,
                                     const std::vector<double>& taus) {
  if (targets.size() != nodes.size()) throw std::invalid_argument("shift_sup: target size mismatch");
  std::vector<Complex> v = shift_grid_serial(alpha, nodes, taus);
  std::vector<double> out(taus.size(), 0.0);
  for (std::size_t k = 0; k < taus.size(); ++k)
    for (std::size_t j = 0; j < nodes.size(); ++j)
      out[k] = std::max(out[k], std::abs(v[k * nodes.size() + j] - targets[j]));
  return out;
}

std::vector<double> shift_sup(double alpha, const std::vector<Complex>& nodes,
                              const std::vector<Complex>& targets, const std::vector<double>& taus) {
  if (targets.size() != nodes.size()) throw std::invalid_argument("shift_sup: target size mismatch");
  std::vector<double> out(taus.size(), 0.0);
  // chunked so the value buffer stays bounded for long scans
  constexpr std::size_t kChunk = 4096;
  std::vector<double> chunk_taus;
  for (std::size_t lo = 0; lo < taus.size(); lo += kChunk) {
    std::size_t hi = std::min(taus.size(), lo + kChunk);
    chunk_taus.assign(taus.begin() + lo, taus.begin() + hi);
    std::vector<Complex> v = shift_grid(alpha, nodes, chunk_taus);
    for (std::size_t k = lo; k < hi; ++k)
      for (std::size_t j = 0; j < nodes.size(); ++j)
        out[k] = std::max(out[k], std::abs(v[(k - lo) * nodes.size() + j] - targets[j]));
  }
  return out;
}

}  // namespace hurlab
