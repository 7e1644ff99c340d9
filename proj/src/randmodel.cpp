#include "hurlab/randmodel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hurlab/parallel.hpp"

namespace hurlab {

namespace {

constexpr std::uint64_t kXSalt = 0x58a1c3e9d24f6b07ULL;
constexpr std::uint64_t kYSalt = 0x2b7e151628aed2a6ULL;
constexpr std::size_t kTrialBlock = 1024;

std::uint64_t tag_code(const TagKey& tag) {
  if (tag.is_unit()) return 1;
  return tag.p * 4 + static_cast<std::uint64_t>(tag.conj_id) * 2 + 2;
}

double circular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return d > kPi ? kTwoPi - d : d;
}

// Sparse (tag, exponent) list for fast repeated phase sums.
using SparseOrd = std::vector<std::pair<TagKey, long>>;

SparseOrd sparse(const OrdVector& v) { return {v.exps.begin(), v.exps.end()}; }

double phase_sum(const SparseOrd& v, std::uint64_t seed, std::uint64_t stream) {
  double acc = 0.0;
  for (const auto& [k, e] : v) acc += double(e) * tag_phase(seed, stream, k);
  return acc;
}

// Y-model tuple collapsed to distinct n.
std::vector<std::pair<long, long>> collapse(const RelationTuple& tuple) {
  std::map<long, long> m;
  for (auto [n, e] : tuple) {
    if (n < 0) throw DomainError("relation tuple: n must be nonnegative");
    m[n] += e;
  }
  std::vector<std::pair<long, long>> out;
  for (auto [n, e] : m)
    if (e != 0) out.emplace_back(n, e);
  return out;
}

struct MomentAcc {
  Complex sum{0.0, 0.0};
  double sum_abs2 = 0.0;
};

MomentEstimate finish(const MomentAcc& acc, long trials) {
  MomentEstimate out;
  out.trials = trials;
  out.mean = acc.sum / double(trials);
  const double var = std::max(0.0, acc.sum_abs2 / trials - std::norm(out.mean));
  out.std_error = std::sqrt(var / trials);
  return out;
}

template <class Draw>
MomentEstimate run_moments(long trials, bool parallel, Draw&& draw) {
  auto block = [&](std::size_t lo, std::size_t hi) {
    MomentAcc a;
    for (std::size_t t = lo; t < hi; ++t) {
      Complex z = draw(static_cast<std::uint64_t>(t));
      a.sum += z;
      a.sum_abs2 += std::norm(z);
    }
    return a;
  };
  auto combine = [](MomentAcc x, const MomentAcc& y) {
    x.sum += y.sum;
    x.sum_abs2 += y.sum_abs2;
    return x;
  };
  MomentAcc acc;
  if (parallel) {
    acc = par::blocked_reduce(static_cast<std::size_t>(trials), kTrialBlock, MomentAcc{}, block, combine);
  } else {
    for (std::size_t lo = 0; lo < static_cast<std::size_t>(trials); lo += kTrialBlock)
      acc = combine(acc, block(lo, std::min<std::size_t>(trials, lo + kTrialBlock)));
  }
  return finish(acc, trials);
}

MomentEstimate moments_impl(Variant v, const AlgebraicParam& alpha, const RelationTuple& tuple, long trials,
                            std::uint64_t seed, bool parallel) {
  if (trials < 1000) throw DomainError("moment_estimate: need at least 1000 trials");
  if (v == Variant::X) {
    const OrdVector c = combined_ord(alpha, tuple);
    if (c.is_zero()) {
      MomentEstimate out;
      out.mean = 1.0;
      out.trials = trials;
      out.exact_relation = true;
      return out;
    }
    const SparseOrd sc = sparse(c);
    return run_moments(trials, parallel,
                       [&](std::uint64_t t) { return std::polar(1.0, phase_sum(sc, seed, t)); });
  }
  const auto col = collapse(tuple);
  if (col.empty()) {
    MomentEstimate out;
    out.mean = 1.0;
    out.trials = trials;
    out.exact_relation = true;
    return out;
  }
  return run_moments(trials, parallel, [&](std::uint64_t t) {
    double ph = 0.0;
    for (auto [n, e] : col) ph += double(e) * index_phase(seed, t, n);
    return std::polar(1.0, ph);
  });
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t key) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ stream);
  h = mix64(h ^ key);
  return double(h >> 11) * 0x1.0p-53;
}

double tag_phase(std::uint64_t seed, std::uint64_t stream, const TagKey& tag) {
  return kTwoPi * uniform01(seed ^ kXSalt, stream, tag_code(tag));
}

double index_phase(std::uint64_t seed, std::uint64_t stream, long n) {
  return kTwoPi * uniform01(seed ^ kYSalt, stream, static_cast<std::uint64_t>(n));
}

double PhaseSample::theta(const TagKey& tag) const {
  {
    std::shared_lock lock(mu_);
    auto it = theta_.find(tag);
    if (it != theta_.end()) return it->second;
  }
  std::unique_lock lock(mu_);
  return theta_.emplace(tag, tag_phase(seed_, stream_, tag)).first->second;
}

std::size_t PhaseSample::size() const {
  std::shared_lock lock(mu_);
  return theta_.size();
}

OrdTable::OrdTable(const AlgebraicParam& alpha, long n_max) : alpha_(alpha) {
  if (n_max < 0) throw DomainError("OrdTable: need n_max >= 0");
  ords_.resize(static_cast<std::size_t>(n_max) + 1);
  par::parallel_for(n_max + 1, [&](std::ptrdiff_t n) { ords_[n] = ord_decompose(alpha_.shifted(n), alpha_.field); });
}

std::vector<TagKey> OrdTable::tags() const {
  std::set<TagKey> s;
  for (const auto& v : ords_)
    for (const auto& [k, e] : v.exps) s.insert(k);
  return {s.begin(), s.end()};
}

std::vector<Complex> sample_X(const OrdTable& table, long N, std::uint64_t seed, std::uint64_t stream) {
  if (N > table.n_max()) throw DomainError("sample_X: N exceeds the ord table");
  std::vector<Complex> out(N + 1);
  for (long n = 0; n <= N; ++n) {
    double ph = 0.0;
    for (const auto& [k, e] : table.ord(n).exps) ph += double(e) * tag_phase(seed, stream, k);
    out[n] = std::polar(1.0, ph);
  }
  return out;
}

std::vector<Complex> sample_X(const AlgebraicParam& alpha, long N, std::uint64_t seed) {
  return sample_X(OrdTable(alpha, N), N, seed, 0);
}

std::vector<Complex> sample_X(const OrdTable& table, long N, const PhaseSample& omega) {
  if (N > table.n_max()) throw DomainError("sample_X: N exceeds the ord table");
  std::vector<Complex> out(N + 1);
  for (long n = 0; n <= N; ++n) {
    double ph = 0.0;
    for (const auto& [k, e] : table.ord(n).exps) ph += double(e) * omega.theta(k);
    out[n] = std::polar(1.0, ph);
  }
  return out;
}

std::vector<Complex> sample_Y(long N, std::uint64_t seed, std::uint64_t stream) {
  if (N < 0) throw DomainError("sample_Y: need N >= 0");
  std::vector<Complex> out(N + 1);
  for (long n = 0; n <= N; ++n) out[n] = std::polar(1.0, index_phase(seed, stream, n));
  return out;
}

MomentEstimate moment_estimate(Variant v, const AlgebraicParam& alpha, const RelationTuple& tuple, long trials,
                               std::uint64_t seed) {
  return moments_impl(v, alpha, tuple, trials, seed, true);
}

MomentEstimate moment_estimate_serial(Variant v, const AlgebraicParam& alpha, const RelationTuple& tuple,
                                      long trials, std::uint64_t seed) {
  return moments_impl(v, alpha, tuple, trials, seed, false);
}

TorusFourier torus_fourier(const AlgebraicParam& alpha, const RelationTuple& tuple, double T) {
  if (!(T > 0.0)) throw DomainError("torus_fourier: need T > 0");
  using Float = boost::multiprecision::cpp_bin_float_50;
  TorusFourier out;
  out.relation = detect_relation(alpha, tuple);
  Float a = (Float(alpha.p) + Float(alpha.q) * sqrt(Float(alpha.field.d))) / Float(alpha.r);
  Float delta = 0;
  for (auto [n, m] : tuple) delta += Float(m) * log(Float(n) + a);
  out.delta = static_cast<double>(delta);
  if (out.relation) {
    out.value = 1.0;
    return out;
  }
  const double x = 0.5 * out.delta * T;
  const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
  out.value = std::polar(sinc, -x);
  return out;
}

std::vector<Complex> rectangle_gram(double alpha, long n0, long n1, const RectDomainU& U) {
  const long K = n1 - n0 + 1;
  std::vector<double> lg(K);
  for (long k = 0; k < K; ++k) lg[k] = std::log(n0 + k + alpha);
  std::vector<Complex> G(static_cast<std::size_t>(K * K));
  for (long m = 0; m < K; ++m)
    for (long n = 0; n < K; ++n) {
      const double L = lg[m] + lg[n], D = lg[n] - lg[m];
      const double sig = (std::exp(-U.sigma_a * L) - std::exp(-U.sigma_b * L)) / L;
      Complex t;
      if (m == n)
        t = U.t_b - U.t_a;
      else
        t = (std::polar(1.0, U.t_b * D) - std::polar(1.0, U.t_a * D)) / Complex(0.0, D);
      G[static_cast<std::size_t>(m * K + n)] = sig * t;
    }
  return G;
}

Omega0Report omega0_experiment(const AlgebraicParam& alpha, int N, double delta, long trials, std::uint64_t seed0,
                               const Omega0Options& opt) {
  if (N < 0) throw DomainError("omega0_experiment: need N >= 0");
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("omega0_experiment: need 0 < delta < 1/2");
  const double p0 = std::pow(delta, N + 1);
  if (p0 * double(trials) < 100.0)
    throw StatisticalPowerError("omega0_experiment: expected conditional hits delta^(N+1) * trials = " +
                                std::to_string(p0 * double(trials)) + " < 100");
  opt.U.validate();
  Omega0Report rep;
  rep.N = N;
  rep.delta = delta;
  rep.trials = trials;
  rep.seed0 = seed0;
  rep.p_independent = p0;
  const long L = std::max<long>(opt.L_factor * N, N + 1);
  OrdTable table(alpha, L);
  RelationAnalysis ra = analyze_relations(alpha, N);
  rep.rank = ra.rank;
  rep.relations = ra.kernel;
  rep.relation_flag = !ra.kernel.empty();

  // omega_0: one Y-sample fixing the arc centres
  for (int n = 0; n <= N; ++n) rep.omega0.push_back(index_phase(seed0, 0, n));
  const double half_width = kPi * delta;

  std::vector<SparseOrd> ords;
  for (long n = 0; n <= L; ++n) ords.push_back(sparse(table.ord(n)));
  const std::vector<Complex> G = rectangle_gram(alpha.float_value, N + 1, L, opt.U);
  const long K = L - N;
  for (long k = 0; k < K; ++k) rep.mean_square_independent += G[static_cast<std::size_t>(k * K + k)].real();

  struct Acc {
    long hits = 0;
    double ms_hit = 0.0, ms2_hit = 0.0, ms_all = 0.0;
  };
  const std::uint64_t xseed = mix64(seed0 + 1);
  auto block = [&](std::size_t lo, std::size_t hi) {
    Acc a;
    std::vector<Complex> c(K);
    for (std::size_t t = lo; t < hi; ++t) {
      bool hit = true;
      for (int n = 0; n <= N && hit; ++n)
        hit = circular_distance(phase_sum(ords[n], xseed, t), rep.omega0[n]) <= half_width;
      for (long k = 0; k < K; ++k) c[k] = std::polar(1.0, phase_sum(ords[N + 1 + k], xseed, t));
      double ms = 0.0;
      for (long m = 0; m < K; ++m) {
        Complex row(0.0, 0.0);
        for (long n = 0; n < K; ++n) row += G[static_cast<std::size_t>(m * K + n)] * std::conj(c[n]);
        ms += (c[m] * row).real();
      }
      a.ms_all += ms;
      if (hit) {
        ++a.hits;
        a.ms_hit += ms;
        a.ms2_hit += ms * ms;
      }
    }
    return a;
  };
  auto combine = [](Acc x, const Acc& y) {
    x.hits += y.hits;
    x.ms_hit += y.ms_hit;
    x.ms2_hit += y.ms2_hit;
    x.ms_all += y.ms_all;
    return x;
  };
  Acc acc = par::blocked_reduce(static_cast<std::size_t>(trials), kTrialBlock, Acc{}, block, combine);

  rep.hits = acc.hits;
  rep.p_hat = double(acc.hits) / trials;
  rep.p_stderr = std::sqrt(rep.p_hat * (1.0 - rep.p_hat) / trials);
  rep.null_stderr = std::sqrt(p0 * (1.0 - p0) / trials);
  rep.z_score = (rep.p_hat - p0) / rep.null_stderr;
  if (opt.delta_check > 3.0)
    rep.bs_error_scale = N * std::pow(std::log(opt.delta_check), N + 1) / opt.delta_check;
  rep.mean_square_all = acc.ms_all / trials;
  rep.mean_square_on_omega0 = acc.ms_hit / trials;
  if (acc.hits > 0) {
    rep.mean_square_conditional = acc.ms_hit / acc.hits;
    const double var = std::max(0.0, acc.ms2_hit / acc.hits - rep.mean_square_conditional * rep.mean_square_conditional);
    rep.mean_square_cond_stderr = std::sqrt(var / acc.hits);
  }
  return rep;
}

std::vector<double> partial_sum_increments(const OrdTable& table, const std::vector<long>& Ns, std::uint64_t seed,
                                           int edge_points) {
  long nmax = 0;
  for (long N : Ns) nmax = std::max(nmax, 2 * N);
  std::vector<Complex> X = sample_X(table, nmax, seed, 0);
  const std::vector<Complex> nodes = CompactBox::exhaustion(1).boundary(edge_points);
  const double a = table.alpha().float_value;
  std::vector<double> out;
  for (long N : Ns) {
    std::vector<double> sup(nodes.size());
    par::parallel_for(static_cast<std::ptrdiff_t>(nodes.size()), [&](std::ptrdiff_t j) {
      Complex acc(0.0, 0.0);
      for (long n = N + 1; n <= 2 * N; ++n) acc += X[n] * std::exp(-nodes[j] * std::log(n + a));
      sup[j] = std::abs(acc);
    });
    out.push_back(*std::max_element(sup.begin(), sup.end()));
  }
  return out;
}

std::vector<Complex> y_gram_estimate(long N, long trials, std::uint64_t seed) {
  const std::size_t K = static_cast<std::size_t>(N + 1);
  using Mat = std::vector<Complex>;
  auto block = [&](std::size_t lo, std::size_t hi) {
    Mat g(K * K, Complex(0.0, 0.0));
    for (std::size_t t = lo; t < hi; ++t) {
      std::vector<Complex> y = sample_Y(N, seed, t);
      for (std::size_t m = 0; m < K; ++m)
        for (std::size_t n = 0; n < K; ++n) g[m * K + n] += y[m] * std::conj(y[n]);
    }
    return g;
  };
  auto combine = [](Mat x, const Mat& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return x;
  };
  Mat g = par::blocked_reduce(static_cast<std::size_t>(trials), kTrialBlock, Mat(K * K, Complex(0.0, 0.0)), block,
                              combine);
  for (auto& z : g) z /= double(trials);
  return g;
}

}  // namespace hurlab
