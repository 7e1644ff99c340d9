#pragma once

#include <vector>

#include "hurlab/common.hpp"

namespace hurlab {

// All phi(q) Dirichlet characters mod q, built from the CRT decomposition of
// (Z/q)^* with a primitive root per odd prime power and {-1, 5} for 2^k.
class CharacterGroup {
 public:
  explicit CharacterGroup(int q);

  int modulus() const { return q_; }
  int order() const { return static_cast<int>(table_.size()); }
  // chi_j(a) for 0 <= a < q; index 0 is the principal character.
  Complex value(int j, long a) const;
  const std::vector<Complex>& table(int j) const { return table_[j]; }

 private:
  int q_;
  std::vector<std::vector<Complex>> table_;
};

int euler_phi(int q);

// L(s, chi) = q^{-s} sum_{a=1}^{q} chi(a) zeta(s, a/q).
Complex dirichlet_L(Complex s, const CharacterGroup& G, int j);

// (q^s / phi(q)) sum_chi conj(chi(a)) L(s, chi): equals zeta(s, a/q) when gcd(a, q) = 1.
Complex rational_decomposition(Complex s, int a, int q);

}  // namespace hurlab
