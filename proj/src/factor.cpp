#include "hurlab/factor.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace hurlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Brent's cycle variant with batched gcds. Returns 0 when the iteration cap
// is hit, n itself when this seed failed.
u64 pollard_brent(u64 n, u64 c, u64& iterations_left) {
  const u64 m = 128;
  u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
  u64 r = 1;
  auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
  do {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    do {
      ys = y;
      u64 lim = std::min(m, r - k);
      for (u64 i = 0; i < lim; ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      if (iterations_left <= lim) return 0;
      iterations_left -= lim;
      g = std::gcd(q, n);
      k += m;
    } while (k < r && g == 1);
    r <<= 1;
  } while (g == 1);
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void split_u64(u64 n, const FactorBudget& budget, u64& iterations_left, std::map<u64, int>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    if (n >> 63) throw FactorizationBudgetExceeded(boost::multiprecision::cpp_int(n));
    ++out[n];
    return;
  }
  for (u64 c = 1; c < 64; ++c) {
    u64 f = pollard_brent(n, c, iterations_left);
    if (f == 0) throw FactorizationBudgetExceeded(boost::multiprecision::cpp_int(n));
    if (f != n && f != 1) {
      split_u64(f, budget, iterations_left, out);
      split_u64(n / f, budget, iterations_left, out);
      return;
    }
  }
  throw FactorizationBudgetExceeded(boost::multiprecision::cpp_int(n));
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit n.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, int>> factorize(const boost::multiprecision::cpp_int& n_in,
                                                     const FactorBudget& budget) {
  using boost::multiprecision::cpp_int;
  if (n_in == 0) throw std::invalid_argument("factorize: zero has no factorization");
  cpp_int n = abs(n_in);
  std::map<u64, int> out;

  auto take = [&](u64 p) {
    while (n % p == 0) {
      n /= p;
      ++out[p];
    }
  };
  take(2);
  take(3);
  // 6k +- 1 wheel
  for (u64 p = 5; p <= budget.trial_limit; p += 6) {
    if (cpp_int(p) * p > n) break;
    take(p);
    take(p + 2);
  }
  if (n > 1) {
    if (n <= cpp_int(budget.trial_limit + 2) * (budget.trial_limit + 2) && n < (cpp_int(1) << 63)) {
      // no factor below the trial limit, so the cofactor is prime
      ++out[static_cast<u64>(n)];
    } else if (n >= (cpp_int(1) << 64)) {
      throw FactorizationBudgetExceeded(n);
    } else {
      u64 left = budget.rho_iterations;
      split_u64(static_cast<u64>(n), budget, left, out);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace hurlab
