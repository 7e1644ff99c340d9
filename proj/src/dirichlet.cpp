#include "hurlab/dirichlet.hpp"

#include <numeric>
#include <stdexcept>

#include "hurlab/hzeta.hpp"

namespace hurlab {

namespace {

// One cyclic factor of (Z/q)^*: discrete logs of every residue mod q
// (-1 where undefined) with respect to a generator of that factor.
struct CyclicFactor {
  int order;
  std::vector<int> log;
};

long powmod(long a, long e, long m) {
  long r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = r * a % m;
    a = a * a % m;
    e >>= 1;
  }
  return r;
}

// Discrete log table of g modulo m, lifted to residues mod q.
CyclicFactor cyclic_factor(int q, int m, long g, int order, bool sign_factor) {
  CyclicFactor f{order, std::vector<int>(q, -1)};
  std::vector<int> log_mod_m(m, -1);
  long x = 1;
  for (int k = 0; k < order; ++k) {
    log_mod_m[x] = k;
    x = x * g % m;
  }
  for (int a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    int r = a % m;
    if (sign_factor) {
      // 2^k component: a = (+-1) * 5^j mod 2^k; this factor records the sign
      f.log[a] = (r % 4 == 1) ? 0 : 1;
    } else if (m % 2 == 0) {
      // the 5^j part: normalize a to 1 mod 4 first
      int rr = (r % 4 == 1) ? r : (m - r) % m;
      f.log[a] = log_mod_m[rr];
    } else {
      f.log[a] = log_mod_m[r];
    }
  }
  return f;
}

bool is_primitive_root(long g, int m, int phi_m) {
  for (int d = 2; d <= phi_m; ++d) {
    if (phi_m % d != 0) continue;
    bool prime = true;
    for (int e = 2; e * e <= d; ++e)
      if (d % e == 0) prime = false;
    if (prime && powmod(g, phi_m / d, m) == 1) return false;
  }
  return true;
}

}  // namespace

int euler_phi(int q) {
  int r = q;
  for (int p = 2; p * p <= q; ++p) {
    if (q % p) continue;
    while (q % p == 0) q /= p;
    r -= r / p;
  }
  if (q > 1) r -= r / q;
  return r;
}

CharacterGroup::CharacterGroup(int q) : q_(q) {
  if (q < 1) throw DomainError("character modulus must be positive");
  std::vector<CyclicFactor> factors;
  int rest = q;
  for (int p = 2; p <= rest; ++p) {
    if (rest % p) continue;
    int m = 1;
    while (rest % p == 0) rest /= p, m *= p;
    if (p == 2) {
      if (m >= 4) factors.push_back(cyclic_factor(q, m, m - 1, 2, true));
      if (m >= 8) factors.push_back(cyclic_factor(q, m, 5, m / 4, false));
    } else {
      int phi_m = m / p * (p - 1);
      long g = 2;
      while (!is_primitive_root(g, m, phi_m)) ++g;
      factors.push_back(cyclic_factor(q, m, g, phi_m, false));
    }
  }
  // Characters are indexed by exponent vectors (e_1, ..., e_k), e_i < order_i.
  int total = 1;
  for (const auto& f : factors) total *= f.order;
  table_.assign(total, std::vector<Complex>(q, Complex(0.0, 0.0)));
  for (int j = 0; j < total; ++j) {
    std::vector<int> e;
    int t = j;
    for (const auto& f : factors) {
      e.push_back(t % f.order);
      t /= f.order;
    }
    for (int a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      double phase = 0.0;
      for (std::size_t i = 0; i < factors.size(); ++i)
        phase += double(e[i]) * factors[i].log[a] / factors[i].order;
      table_[j][a] = std::polar(1.0, kTwoPi * phase);
    }
  }
  if (q == 1) table_[0][0] = 1.0;
}

Complex CharacterGroup::value(int j, long a) const {
  long r = a % q_;
  if (r < 0) r += q_;
  return table_[j][r];
}

Complex dirichlet_L(Complex s, const CharacterGroup& G, int j) {
  const int q = G.modulus();
  CompensatedSum acc;
  for (int a = 1; a <= q; ++a) {
    Complex c = G.value(j, a);
    if (c == Complex(0.0, 0.0)) continue;
    acc.add(c * hurwitz(s, double(a) / q));
  }
  return acc.value() * std::exp(-s * std::log(double(q)));
}

Complex rational_decomposition(Complex s, int a, int q) {
  if (a < 1 || a > q || std::gcd(a, q) != 1)
    throw DomainError("rational_decomposition: need 1 <= a <= q with gcd(a, q) = 1");
  CharacterGroup G(q);
  CompensatedSum acc;
  for (int j = 0; j < G.order(); ++j) acc.add(std::conj(G.value(j, a)) * dirichlet_L(s, G, j));
  return acc.value() * std::exp(s * std::log(double(q))) / double(euler_phi(q));
}

}  // namespace hurlab
