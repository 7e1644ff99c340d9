// Parallel kernels against their serial references. OMP_NUM_THREADS sets the
// thread count of the parallel side.

#include <benchmark/benchmark.h>

#include <random>

#include "hurlab/geometry.hpp"
#include "hurlab/kernels.hpp"
#include "hurlab/qfield.hpp"
#include "hurlab/randmodel.hpp"

using namespace hurlab;

namespace {

std::vector<Complex> circle_nodes(int n) {
  std::vector<Complex> v;
  for (int j = 0; j < n; ++j) v.push_back(0.75 + std::polar(0.1, kTwoPi * j / n));
  return v;
}

std::vector<double> tau_grid(int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = 0.05 * k;
  return t;
}

void BM_shift_grid(benchmark::State& st) {
  const auto nodes = circle_nodes(64);
  const auto taus = tau_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(shift_grid(0.3, nodes, taus));
  st.SetItemsProcessed(st.iterations() * nodes.size() * taus.size());
}

void BM_shift_grid_serial(benchmark::State& st) {
  const auto nodes = circle_nodes(64);
  const auto taus = tau_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(shift_grid_serial(0.3, nodes, taus));
  st.SetItemsProcessed(st.iterations() * nodes.size() * taus.size());
}

void BM_shift_sup(benchmark::State& st) {
  const auto nodes = circle_nodes(64);
  std::vector<Complex> targets;
  for (Complex s : nodes) targets.push_back(s - 0.75);
  const auto taus = tau_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(shift_sup(0.3, nodes, targets, taus));
  st.SetItemsProcessed(st.iterations() * nodes.size() * taus.size());
}

void BM_shift_sup_serial(benchmark::State& st) {
  const auto nodes = circle_nodes(64);
  std::vector<Complex> targets;
  for (Complex s : nodes) targets.push_back(s - 0.75);
  const auto taus = tau_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(shift_sup_serial(0.3, nodes, targets, taus));
  st.SetItemsProcessed(st.iterations() * nodes.size() * taus.size());
}

const RelationTuple kTuple{{1, 1}, {4, -2}, {6, 1}, {9, 1}};

void BM_moment(benchmark::State& st) {
  const AlgebraicParam a = make_param(5, 1, 1, 4);
  for (auto _ : st) benchmark::DoNotOptimize(moment_estimate(Variant::X, a, kTuple, st.range(0), 1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_moment_serial(benchmark::State& st) {
  const AlgebraicParam a = make_param(5, 1, 1, 4);
  for (auto _ : st) benchmark::DoNotOptimize(moment_estimate_serial(Variant::X, a, kTuple, st.range(0), 1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_bergman_inner(benchmark::State& st) {
  RectDomainU U{0.6, 0.9, 0.0, 100.0};
  U.t_panels = static_cast<int>(st.range(0));
  auto g = make_grid(U);
  const GridFunction f = GridFunction::dirichlet_term(g, 0.3, 3), h = GridFunction::dirichlet_term(g, 0.3, 7);
  for (auto _ : st) benchmark::DoNotOptimize(bergman_inner(f, h));
  st.SetItemsProcessed(st.iterations() * g->nodes.size());
}

}  // namespace

BENCHMARK(BM_shift_grid)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shift_grid_serial)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shift_sup)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shift_sup_serial)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_moment)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_moment_serial)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bergman_inner)->Arg(16)->Arg(256)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
