#pragma once

// The random models X_alpha(n) (phases on prime ideals and the unit, pulled
// back through ord) and Y_alpha(n) (independent phases per n), with moment
// estimates, torus Fourier limits and the conditional Omega_0 experiment.

#include <cstdint>
#include <map>
#include <shared_mutex>
#include <vector>

#include "hurlab/common.hpp"
#include "hurlab/geometry.hpp"
#include "hurlab/qfield.hpp"

namespace hurlab {

// Counter-based uniform draws: the value depends only on (seed, stream, key),
// so results do not depend on evaluation order or thread count.
std::uint64_t mix64(std::uint64_t x);
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t key);

enum class Variant { X, Y };

// Phase of a prime-ideal or unit tag (X model) and of an index n (Y model).
double tag_phase(std::uint64_t seed, std::uint64_t stream, const TagKey& tag);
double index_phase(std::uint64_t seed, std::uint64_t stream, long n);

// One realization omega: tag -> theta in [0, 2 pi), filled on first use.
// Lookups from many threads are safe; the first caller inserts.
class PhaseSample {
 public:
  PhaseSample(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  PhaseSample(const PhaseSample&) = delete;
  PhaseSample& operator=(const PhaseSample&) = delete;

  double theta(const TagKey& tag) const;
  std::size_t size() const;
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_, stream_;
  mutable std::shared_mutex mu_;
  mutable std::map<TagKey, double> theta_;
};

// ord(n + alpha) for 0 <= n <= N_max, computed once.
class OrdTable {
 public:
  OrdTable(const AlgebraicParam& alpha, long n_max);
  const OrdVector& ord(long n) const { return ords_.at(static_cast<std::size_t>(n)); }
  long n_max() const { return static_cast<long>(ords_.size()) - 1; }
  const AlgebraicParam& alpha() const { return alpha_; }
  // Every tag appearing in some ord(n + alpha), n <= N_max.
  std::vector<TagKey> tags() const;

 private:
  AlgebraicParam alpha_;
  std::vector<OrdVector> ords_;
};

// X_alpha(0..N) for one sample; stream selects the sample within a seed.
std::vector<Complex> sample_X(const OrdTable& table, long N, std::uint64_t seed, std::uint64_t stream = 0);
std::vector<Complex> sample_X(const AlgebraicParam& alpha, long N, std::uint64_t seed);
std::vector<Complex> sample_X(const OrdTable& table, long N, const PhaseSample& omega);
std::vector<Complex> sample_Y(long N, std::uint64_t seed, std::uint64_t stream = 0);

struct MomentEstimate {
  Complex mean;
  double std_error = 0.0;
  long trials = 0;
  bool exact_relation = false;  // true when the X-model product is identically 1
};

// Monte Carlo mean of prod X(n_j)^{m_j} (or the Y analogue) over `trials`
// independent samples. Requires trials >= 1000.
MomentEstimate moment_estimate(Variant v, const AlgebraicParam& alpha, const RelationTuple& tuple, long trials,
                               std::uint64_t seed);
// Single-threaded reference with the same sample streams.
MomentEstimate moment_estimate_serial(Variant v, const AlgebraicParam& alpha, const RelationTuple& tuple,
                                      long trials, std::uint64_t seed);

struct TorusFourier {
  Complex value;
  double delta = 0.0;  // sum m_j log(n_j + alpha)
  bool relation = false;
};

// (1/T) int_0^T prod (n_j + alpha)^{-i m_j tau} d tau in closed form.
TorusFourier torus_fourier(const AlgebraicParam& alpha, const RelationTuple& tuple, double T);

struct Omega0Options {
  RectDomainU U{0.6, 0.9, 0.0, 1.0};
  long L_factor = 4;        // L = L_factor * N
  double delta_check = 0.0;  // Beurling-Selberg scale; only used for the reported error scale
};

struct Omega0Report {
  int N = 0;
  double delta = 0.0;
  long trials = 0;
  long hits = 0;
  std::uint64_t seed0 = 0;
  std::vector<double> omega0;  // arc centres theta_n, n <= N
  double p_hat = 0.0;
  double p_stderr = 0.0;        // binomial standard error at p_hat
  double p_independent = 0.0;   // delta^{N+1}
  double null_stderr = 0.0;     // binomial standard error at delta^{N+1}
  double z_score = 0.0;         // (p_hat - delta^{N+1}) / null_stderr
  double bs_error_scale = 0.0;  // N (log Delta)^{N+1} / Delta when delta_check > 3
  int rank = 0;                 // rank of {ord(n + alpha) : n <= N}
  std::vector<std::vector<long>> relations;
  bool relation_flag = false;
  double mean_square_conditional = 0.0;  // E[||zeta_L - zeta_N||^2 | Omega_0]
  double mean_square_cond_stderr = 0.0;
  double mean_square_on_omega0 = 0.0;    // E[1_{Omega_0} ||zeta_L - zeta_N||^2]
  double mean_square_all = 0.0;          // unconditional Monte Carlo mean
  double mean_square_independent = 0.0;  // sum_{N < n <= L} ||(n + alpha)^{-s}||^2
};

// Throws StatisticalPowerError unless delta^{N+1} * trials >= 100.
Omega0Report omega0_experiment(const AlgebraicParam& alpha, int N, double delta, long trials, std::uint64_t seed0,
                               const Omega0Options& opt = {});

// Closed-form Gram matrix <(m + alpha)^{-s}, (n + alpha)^{-s}> over a rectangle,
// indices n0..n1 inclusive, row-major.
std::vector<Complex> rectangle_gram(double alpha, long n0, long n1, const RectDomainU& U);

// max over the boundary of K_1 of |zeta_{2N}(s, X) - zeta_N(s, X)| for each N.
std::vector<double> partial_sum_increments(const OrdTable& table, const std::vector<long>& Ns, std::uint64_t seed,
                                           int edge_points = 64);

// Empirical E[Y(m) conj Y(n)] for 0 <= m, n <= N, row-major.
std::vector<Complex> y_gram_estimate(long N, long trials, std::uint64_t seed);

}  // namespace hurlab
