#pragma once

// Thin OpenMP layer. Builds without OpenMP compile the pragmas away.
// All reductions in the library go through fixed-size blocks that are
// summed serially, so results do not depend on the thread count.

#include <cstddef>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#define HURLAB_PRAGMA(x) _Pragma(#x)
#define HURLAB_OMP(args) HURLAB_PRAGMA(omp args)
#else
#define HURLAB_OMP(args)
#endif

namespace hurlab::par {

inline int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline int hardware_threads() {
#if defined(_OPENMP)
  return omp_get_num_procs();
#else
  return 1;
#endif
}

// Caps the request at the machine's processor count; returns the value used.
inline int set_threads(int requested) {
  int n = requested < 1 ? 1 : requested;
  if (n > hardware_threads()) n = hardware_threads();
#if defined(_OPENMP)
  omp_set_num_threads(n);
#endif
  return n;
}

// Calls body(i) for i in [0, n) in parallel (dynamic schedule).
template <class Body>
void parallel_for(std::ptrdiff_t n, Body&& body) {
  HURLAB_OMP(parallel for schedule(dynamic, 1))
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

// Deterministic parallel reduction: [0, n) is split into blocks of
// `block` indices, each block is reduced serially by block_fn(lo, hi) into a
// slot, then the slots are combined left to right.
template <class T, class BlockFn, class Combine>
T blocked_reduce(std::size_t n, std::size_t block, T init, BlockFn&& block_fn, Combine&& combine) {
  if (n == 0) return init;
  const std::size_t nblocks = (n + block - 1) / block;
  std::vector<T> slots(nblocks, init);
  HURLAB_OMP(parallel for schedule(static))
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    std::size_t lo = static_cast<std::size_t>(b) * block;
    std::size_t hi = lo + block < n ? lo + block : n;
    slots[static_cast<std::size_t>(b)] = block_fn(lo, hi);
  }
  T acc = init;
  for (const T& s : slots) acc = combine(acc, s);
  return acc;
}

}  // namespace hurlab::par
