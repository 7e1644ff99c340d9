#pragma once

// Exact arithmetic in real quadratic fields Q(sqrt d) of class number one,
// prime-ideal generators, and the ord(y, lambda) exponent decomposition.
//
// Elements of the ring of integers are a + b*omega where omega is sqrt(d),
// or (1 + sqrt(d))/2 when d = 1 mod 4. The real embedding is sqrt(d) > 0.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include "json.hpp"

#include "hurlab/factor.hpp"

namespace hurlab {

using BigInt = boost::multiprecision::cpp_int;

enum class OmegaKind { sqrt_d, half };

struct QuadInt {
  BigInt a;
  BigInt b;
  bool operator==(const QuadInt&) const = default;
};

struct FieldDesc {
  int d = 0;
  OmegaKind omega_kind = OmegaKind::sqrt_d;
  QuadInt fundamental_unit;
  bool class_number_one = true;

  // omega^2 = omega + k in the half case, omega^2 = d otherwise.
  BigInt k() const { return BigInt((d - 1) / 4); }
  double omega_value() const;
  double omega_conj_value() const;
  double log_unit() const;
};

// Builds the descriptor for a supported d; throws DomainError otherwise.
FieldDesc make_field(int d);
const std::vector<int>& supported_fields();

// Loads descriptors from JSON keyed by d, e.g.
//   {"2": {"unit": [1, 1]}, "5": {"unit": [0, 1]}}
// The unit is given in the omega basis. Each entry is checked against the
// built-in field data (allowlist, norm +-1, > 1, fundamental).
std::map<int, FieldDesc> load_fields(const nlohmann::json& j);

QuadInt add(const QuadInt& x, const QuadInt& y);
QuadInt sub(const QuadInt& x, const QuadInt& y);
QuadInt mul(const FieldDesc& F, const QuadInt& x, const QuadInt& y);
QuadInt conj(const FieldDesc& F, const QuadInt& x);
BigInt norm(const FieldDesc& F, const QuadInt& x);
QuadInt power(const FieldDesc& F, const QuadInt& x, long e);  // e >= 0
// Unit power u^e for any integer e (uses u^-1 = N(u) * conj(u)).
QuadInt unit_power(const FieldDesc& F, long e);
// Exact sign (-1, 0, 1) of x under the fixed real embedding.
int sign(const FieldDesc& F, const QuadInt& x);
double to_double(const FieldDesc& F, const QuadInt& x);
double to_double_conj(const FieldDesc& F, const QuadInt& x);
// Exact division x / y if the quotient is integral.
bool try_divide(const FieldDesc& F, const QuadInt& x, const QuadInt& y, QuadInt& out);
std::string to_string(const FieldDesc& F, const QuadInt& x);

// num / den with den > 0.
struct FieldElement {
  QuadInt num;
  BigInt den{1};
};

// alpha = (p + q sqrt d) / r.
struct AlgebraicParam {
  FieldDesc field;
  BigInt p, q, r;
  double float_value = 0.0;

  // n + alpha as an exact field element.
  FieldElement shifted(long n) const;
  std::string literal() const;  // "sqrt:d:p:q:r"
};

AlgebraicParam make_param(int d, long p, long q, long r);

enum class Splitting { split, inert, ramified };
const char* to_string(Splitting s);

struct PrimeTag {
  std::uint64_t p = 0;
  Splitting splitting = Splitting::inert;
  QuadInt generator;
  int conj_id = 0;
};

// The prime ideals above p with normalized generators (memoized, thread-safe).
std::vector<PrimeTag> splitting_type(std::uint64_t p, const FieldDesc& F);

// Tag identity used in exponent maps. p == 0 is the fundamental unit.
struct TagKey {
  std::uint64_t p = 0;
  int conj_id = 0;
  auto operator<=>(const TagKey&) const = default;
  bool is_unit() const { return p == 0; }
};

struct OrdVector {
  std::map<TagKey, long> exps;  // zero entries are never stored

  long unit() const;
  long at(const TagKey& k) const;
  void add(const TagKey& k, long e);
  OrdVector& operator+=(const OrdVector& o);
  OrdVector& operator-=(const OrdVector& o);
  OrdVector scaled(long m) const;
  bool is_zero() const { return exps.empty(); }
  bool operator==(const OrdVector&) const = default;

  nlohmann::json to_json() const;
  static OrdVector from_json(const nlohmann::json& j);
};

// ord(y, .) for y > 0. Throws DomainError if y <= 0 and
// FactorizationBudgetExceeded if a norm cannot be factored.
OrdVector ord_decompose(const FieldElement& y, const FieldDesc& F,
                        const FactorBudget& budget = FactorBudget{});

// Multiplies out prod generator^a * u^b; returns it as num/den in lowest terms
// relative to the rational denominator.
FieldElement reconstruct(const OrdVector& v, const FieldDesc& F);
bool equal(const FieldDesc& F, const FieldElement& x, const FieldElement& y);
FieldElement mul(const FieldDesc& F, const FieldElement& x, const FieldElement& y);

// (n_j, m_j) pairs.
using RelationTuple = std::vector<std::pair<long, long>>;

OrdVector combined_ord(const AlgebraicParam& alpha, const RelationTuple& tuple);
bool detect_relation(const AlgebraicParam& alpha, const RelationTuple& tuple);

// |prod (n_j + alpha)^{m_j} - 1| evaluated with 200-bit binary floats.
double relation_product_error(const AlgebraicParam& alpha, const RelationTuple& tuple);

// Rank of {ord(n + alpha) : 0 <= n <= N} and an integer basis of the
// relation lattice kernel (each vector indexed by n).
struct RelationAnalysis {
  int rank = 0;
  std::vector<std::vector<long>> kernel;
};
RelationAnalysis analyze_relations(const AlgebraicParam& alpha, long N);

}  // namespace hurlab
