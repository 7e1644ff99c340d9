#include "hurlab/qfield.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "hurlab/common.hpp"

namespace hurlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct BuiltinField {
  int d;
  long ua, ub;
};

// Fundamental units in the omega basis.
constexpr BuiltinField kBuiltin[] = {
    {2, 1, 1},   // 1 + sqrt2
    {3, 2, 1},   // 2 + sqrt3
    {5, 0, 1},   // golden ratio
    {6, 5, 2},   // 5 + 2 sqrt6
    {7, 8, 3},   // 8 + 3 sqrt7
    {13, 1, 1},  // (3 + sqrt13)/2
};

// Sign of X + Y sqrt(d).
int sign_xy(const BigInt& X, const BigInt& Y, int d) {
  int sx = X.sign(), sy = Y.sign();
  if (sy == 0) return sx;
  if (sx == 0) return sy;
  if (sx == sy) return sx;
  BigInt x2 = X * X, y2 = Y * Y * d;
  return x2 > y2 ? sx : sy;
}

BigInt mod_pos(const BigInt& a, u64 m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = static_cast<u64>(static_cast<u128>(r) * a % m);
    a = static_cast<u64>(static_cast<u128>(a) * a % m);
    e >>= 1;
  }
  return r;
}

bool perfect_square(u128 t, u128& root) {
  u128 s = static_cast<u128>(std::sqrt(static_cast<long double>(t)));
  while (s * s > t) --s;
  while ((s + 1) * (s + 1) <= t) ++s;
  root = s;
  return s * s == t;
}

// Element of norm +-p (p split or ramified).
QuadInt find_norm_p(u64 p, const FieldDesc& F) {
  const double u = std::exp(F.log_unit());
  const u64 B = static_cast<u64>(2.0 * std::sqrt(static_cast<double>(p) * u / F.d)) + 3;
  const u128 d = static_cast<u128>(F.d);
  const bool half = F.omega_kind == OmegaKind::half;
  const u128 P = half ? static_cast<u128>(p) * 4 : static_cast<u128>(p);
  for (u64 b = 1; b <= B; ++b) {
    u128 db2 = d * b * b;
    u128 sq;
    for (int sgn : {+1, -1}) {
      if (sgn < 0 && db2 < P) continue;
      u128 t = sgn > 0 ? db2 + P : db2 - P;
      if (!perfect_square(t, sq)) continue;
      if (!half) return QuadInt{BigInt(static_cast<u64>(sq)), BigInt(b)};
      // (2a + b)^2 - d b^2 = +-4p
      if ((sq & 1) != (b & 1)) continue;
      BigInt a = (BigInt(static_cast<u64>(sq)) - BigInt(b)) / 2;
      return QuadInt{a, BigInt(b)};
    }
  }
  throw std::logic_error("no element of norm +-" + std::to_string(p) + " found in Q(sqrt " +
                         std::to_string(F.d) + ")");
}

// Associate with |log|x| - log|N|/2| minimal, then made positive.
QuadInt normalize_generator(const QuadInt& g, const FieldDesc& F) {
  double lx = std::log(std::abs(to_double(F, g)));
  double ln = 0.5 * std::log(std::abs(norm(F, g).convert_to<double>()));
  long k = std::lround((ln - lx) / F.log_unit());
  QuadInt out = mul(F, g, unit_power(F, k));
  if (sign(F, out) < 0) out = QuadInt{-out.a, -out.b};
  return out;
}

// r with a + b r = 0 mod p, i.e. the residue of omega for the prime containing g.
u64 omega_residue(const QuadInt& g, u64 p) {
  u64 a = static_cast<u64>(mod_pos(g.a, p));
  u64 b = static_cast<u64>(mod_pos(g.b, p));
  u64 binv = powmod(b, p - 2, p);
  u64 r = static_cast<u64>(static_cast<u128>(a) * binv % p);
  return r == 0 ? 0 : p - r;
}

std::vector<PrimeTag> compute_splitting(u64 p, const FieldDesc& F) {
  const bool half = F.omega_kind == OmegaKind::half;
  const u64 D = half ? static_cast<u64>(F.d) : 4ULL * F.d;
  Splitting kind;
  if (D % p == 0) {
    kind = Splitting::ramified;
  } else if (p == 2) {
    // only reachable in the half case
    kind = (F.d % 8 == 1) ? Splitting::split : Splitting::inert;
  } else {
    u64 dm = static_cast<u64>(F.d) % p;
    kind = powmod(dm, (p - 1) / 2, p) == 1 ? Splitting::split : Splitting::inert;
  }
  if (kind == Splitting::inert) return {PrimeTag{p, kind, QuadInt{BigInt(p), BigInt(0)}, 0}};
  QuadInt g = normalize_generator(find_norm_p(p, F), F);
  if (kind == Splitting::ramified) return {PrimeTag{p, kind, g, 0}};
  QuadInt h = normalize_generator(conj(F, g), F);
  u64 rg = omega_residue(g, p), rh = omega_residue(h, p);
  if (rg > rh) std::swap(g, h);
  return {PrimeTag{p, kind, g, 0}, PrimeTag{p, kind, h, 1}};
}

// Valuations of an algebraic integer x > 0 together with its unit part.
OrdVector ord_integral(QuadInt x, const FieldDesc& F, const FactorBudget& budget) {
  OrdVector out;
  BigInt N = norm(F, x);
  if (N == 0) throw DomainError("ord_decompose: zero element");
  for (auto [p, e] : factorize(N, budget)) {
    (void)e;
    for (const PrimeTag& tag : splitting_type(p, F)) {
      long v = 0;
      QuadInt q;
      while (try_divide(F, x, tag.generator, q)) {
        x = std::move(q);
        ++v;
      }
      if (v) out.add(TagKey{p, tag.conj_id}, v);
    }
  }
  BigInt n = norm(F, x);
  if (n != 1 && n != -1) throw std::logic_error("ord_decompose: residual is not a unit");
  // x is a positive unit u^b; the larger embedding gives the better logarithm
  double x1 = to_double(F, x), x2 = to_double_conj(F, x);
  double lg = std::abs(x1) >= std::abs(x2) ? std::log(std::abs(x1)) : -std::log(std::abs(x2));
  long b = std::lround(lg / F.log_unit());
  for (long cand : {b, b - 1, b + 1}) {
    if (unit_power(F, cand) == x) {
      out.add(TagKey{0, 0}, cand);
      return out;
    }
  }
  throw std::logic_error("ord_decompose: unit exponent not certified");
}

}  // namespace

double FieldDesc::omega_value() const {
  double s = std::sqrt(static_cast<double>(d));
  return omega_kind == OmegaKind::half ? 0.5 * (1.0 + s) : s;
}

double FieldDesc::omega_conj_value() const {
  double s = std::sqrt(static_cast<double>(d));
  return omega_kind == OmegaKind::half ? 0.5 * (1.0 - s) : -s;
}

double FieldDesc::log_unit() const { return std::log(to_double(*this, fundamental_unit)); }

const std::vector<int>& supported_fields() {
  static const std::vector<int> v = [] {
    std::vector<int> out;
    for (const auto& b : kBuiltin) out.push_back(b.d);
    return out;
  }();
  return v;
}

FieldDesc make_field(int d) {
  for (const auto& b : kBuiltin) {
    if (b.d != d) continue;
    FieldDesc F;
    F.d = d;
    F.omega_kind = (d % 4 == 1) ? OmegaKind::half : OmegaKind::sqrt_d;
    F.fundamental_unit = QuadInt{BigInt(b.ua), BigInt(b.ub)};
    F.class_number_one = true;
    return F;
  }
  throw DomainError("unsupported field d=" + std::to_string(d) +
                    " (supported: 2, 3, 5, 6, 7, 13)");
}

std::map<int, FieldDesc> load_fields(const nlohmann::json& j) {
  std::map<int, FieldDesc> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    int d = std::stoi(it.key());
    FieldDesc ref = make_field(d);
    const auto& e = it.value();
    FieldDesc F = ref;
    if (e.contains("omega")) {
      std::string k = e.at("omega").get<std::string>();
      OmegaKind kind = k == "half" ? OmegaKind::half : OmegaKind::sqrt_d;
      if (kind != ref.omega_kind) throw DomainError("field " + it.key() + ": wrong ring of integers");
    }
    if (e.contains("unit")) {
      F.fundamental_unit = QuadInt{BigInt(e.at("unit").at(0).get<long>()),
                                   BigInt(e.at("unit").at(1).get<long>())};
    }
    BigInt n = norm(F, F.fundamental_unit);
    if (n != 1 && n != -1) throw DomainError("field " + it.key() + ": unit must have norm +-1");
    if (sign(F, sub(F.fundamental_unit, QuadInt{1, 0})) <= 0)
      throw DomainError("field " + it.key() + ": unit must exceed 1");
    if (!(F.fundamental_unit == ref.fundamental_unit))
      throw DomainError("field " + it.key() + ": unit is not fundamental");
    if (e.contains("class_number_one") && !e.at("class_number_one").get<bool>())
      throw DomainError("field " + it.key() + ": class number one required");
    out.emplace(d, F);
  }
  return out;
}

QuadInt add(const QuadInt& x, const QuadInt& y) { return {x.a + y.a, x.b + y.b}; }
QuadInt sub(const QuadInt& x, const QuadInt& y) { return {x.a - y.a, x.b - y.b}; }

QuadInt mul(const FieldDesc& F, const QuadInt& x, const QuadInt& y) {
  if (F.omega_kind == OmegaKind::half) {
    BigInt bb = x.b * y.b;
    return {x.a * y.a + F.k() * bb, x.a * y.b + x.b * y.a + bb};
  }
  return {x.a * y.a + F.d * x.b * y.b, x.a * y.b + x.b * y.a};
}

QuadInt conj(const FieldDesc& F, const QuadInt& x) {
  if (F.omega_kind == OmegaKind::half) return {x.a + x.b, -x.b};
  return {x.a, -x.b};
}

BigInt norm(const FieldDesc& F, const QuadInt& x) {
  if (F.omega_kind == OmegaKind::half) return x.a * x.a + x.a * x.b - F.k() * x.b * x.b;
  return x.a * x.a - F.d * x.b * x.b;
}

QuadInt power(const FieldDesc& F, const QuadInt& x, long e) {
  if (e < 0) throw std::invalid_argument("power: negative exponent");
  QuadInt r{1, 0}, base = x;
  while (e) {
    if (e & 1) r = mul(F, r, base);
    base = mul(F, base, base);
    e >>= 1;
  }
  return r;
}

QuadInt unit_power(const FieldDesc& F, long e) {
  if (e >= 0) return power(F, F.fundamental_unit, e);
  QuadInt inv = conj(F, F.fundamental_unit);
  if (norm(F, F.fundamental_unit) < 0) inv = QuadInt{-inv.a, -inv.b};
  return power(F, inv, -e);
}

int sign(const FieldDesc& F, const QuadInt& x) {
  if (F.omega_kind == OmegaKind::half) return sign_xy(2 * x.a + x.b, x.b, F.d);
  return sign_xy(x.a, x.b, F.d);
}

double to_double(const FieldDesc& F, const QuadInt& x) {
  double a = x.a.convert_to<double>(), b = x.b.convert_to<double>();
  double v1 = a + b * F.omega_value();
  double v2 = a + b * F.omega_conj_value();
  // avoid cancellation: v1 = N / v2 when v1 is the small embedding
  if (std::abs(v1) < std::abs(v2) && v2 != 0.0) return norm(F, x).convert_to<double>() / v2;
  return v1;
}

double to_double_conj(const FieldDesc& F, const QuadInt& x) { return to_double(F, conj(F, x)); }

bool try_divide(const FieldDesc& F, const QuadInt& x, const QuadInt& y, QuadInt& out) {
  BigInt n = norm(F, y);
  if (n == 0) throw DomainError("division by zero");
  QuadInt t = mul(F, x, conj(F, y));
  if (t.a % n != 0 || t.b % n != 0) return false;
  out = QuadInt{t.a / n, t.b / n};
  return true;
}

std::string to_string(const FieldDesc& F, const QuadInt& x) {
  std::ostringstream os;
  os << x.a << (x.b < 0 ? "-" : "+") << abs(x.b);
  if (F.omega_kind == OmegaKind::half)
    os << "*(1+sqrt" << F.d << ")/2";
  else
    os << "*sqrt" << F.d;
  return os.str();
}

FieldElement AlgebraicParam::shifted(long n) const {
  BigInt a0 = BigInt(n) * r + p;
  if (field.omega_kind == OmegaKind::half) return FieldElement{QuadInt{a0 - q, 2 * q}, r};
  return FieldElement{QuadInt{a0, q}, r};
}

std::string AlgebraicParam::literal() const {
  std::ostringstream os;
  os << "sqrt:" << field.d << ":" << p << ":" << q << ":" << r;
  return os.str();
}

AlgebraicParam make_param(int d, long p, long q, long r) {
  AlgebraicParam A;
  A.field = make_field(d);
  if (q == 0) throw DomainError("alpha must be irrational (q != 0)");
  if (r == 0) throw DomainError("alpha: zero denominator");
  if (r < 0) p = -p, q = -q, r = -r;
  A.p = p;
  A.q = q;
  A.r = r;
  if (sign_xy(A.p, A.q, d) <= 0 || sign_xy(A.p - A.r, A.q, d) >= 0)
    throw DomainError("alpha must lie in (0, 1)");
  long double s = std::sqrt(static_cast<long double>(d));
  A.float_value = static_cast<double>((p + q * s) / r);
  return A;
}

const char* to_string(Splitting s) {
  switch (s) {
    case Splitting::split:
      return "split";
    case Splitting::inert:
      return "inert";
    default:
      return "ramified";
  }
}

std::vector<PrimeTag> splitting_type(std::uint64_t p, const FieldDesc& F) {
  if (!is_prime_u64(p)) throw DomainError("splitting_type: " + std::to_string(p) + " is not prime");
  static std::shared_mutex mu;
  static std::map<std::pair<int, u64>, std::vector<PrimeTag>> cache;
  const auto key = std::make_pair(F.d, p);
  {
    std::shared_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto tags = compute_splitting(p, F);
  std::unique_lock lock(mu);
  return cache.emplace(key, std::move(tags)).first->second;
}

long OrdVector::unit() const { return at(TagKey{0, 0}); }

long OrdVector::at(const TagKey& k) const {
  auto it = exps.find(k);
  return it == exps.end() ? 0 : it->second;
}

void OrdVector::add(const TagKey& k, long e) {
  if (e == 0) return;
  auto [it, inserted] = exps.emplace(k, e);
  if (!inserted) {
    it->second += e;
    if (it->second == 0) exps.erase(it);
  }
}

OrdVector& OrdVector::operator+=(const OrdVector& o) {
  for (const auto& [k, e] : o.exps) add(k, e);
  return *this;
}

OrdVector& OrdVector::operator-=(const OrdVector& o) {
  for (const auto& [k, e] : o.exps) add(k, -e);
  return *this;
}

OrdVector OrdVector::scaled(long m) const {
  OrdVector out;
  if (m == 0) return out;
  for (const auto& [k, e] : exps) out.exps.emplace(k, e * m);
  return out;
}

nlohmann::json OrdVector::to_json() const {
  nlohmann::json primes = nlohmann::json::array();
  for (const auto& [k, e] : exps) {
    if (k.is_unit()) continue;
    primes.push_back({k.p, k.conj_id, e});
  }
  return {{"primes", primes}, {"unit", unit()}};
}

OrdVector OrdVector::from_json(const nlohmann::json& j) {
  OrdVector v;
  for (const auto& row : j.at("primes"))
    v.add(TagKey{row.at(0).get<u64>(), row.at(1).get<int>()}, row.at(2).get<long>());
  v.add(TagKey{0, 0}, j.at("unit").get<long>());
  return v;
}

OrdVector ord_decompose(const FieldElement& y, const FieldDesc& F, const FactorBudget& budget) {
  if (y.den <= 0) throw DomainError("ord_decompose: denominator must be positive");
  if (sign(F, y.num) <= 0) throw DomainError("ord_decompose: element must be positive");
  OrdVector v = ord_integral(y.num, F, budget);
  if (y.den != 1) v -= ord_integral(QuadInt{y.den, 0}, F, budget);
  return v;
}

FieldElement reconstruct(const OrdVector& v, const FieldDesc& F) {
  QuadInt num{1, 0}, den{1, 0};
  for (const auto& [k, e] : v.exps) {
    QuadInt g;
    if (k.is_unit()) {
      g = F.fundamental_unit;
    } else {
      for (const PrimeTag& t : splitting_type(k.p, F))
        if (t.conj_id == k.conj_id) g = t.generator;
    }
    if (e > 0)
      num = mul(F, num, power(F, g, e));
    else
      den = mul(F, den, power(F, g, -e));
  }
  BigInt n = norm(F, den);
  QuadInt top = mul(F, num, conj(F, den));
  if (n < 0) top = QuadInt{-top.a, -top.b}, n = -n;
  return FieldElement{top, n};
}

bool equal(const FieldDesc& F, const FieldElement& x, const FieldElement& y) {
  (void)F;
  return x.num.a * y.den == y.num.a * x.den && x.num.b * y.den == y.num.b * x.den;
}

FieldElement mul(const FieldDesc& F, const FieldElement& x, const FieldElement& y) {
  return FieldElement{mul(F, x.num, y.num), x.den * y.den};
}

OrdVector combined_ord(const AlgebraicParam& alpha, const RelationTuple& tuple) {
  OrdVector v;
  for (auto [n, m] : tuple) {
    if (n < 0) throw DomainError("relation tuple: n must be nonnegative");
    if (m == 0) continue;
    v += ord_decompose(alpha.shifted(n), alpha.field).scaled(m);
  }
  return v;
}

bool detect_relation(const AlgebraicParam& alpha, const RelationTuple& tuple) {
  return combined_ord(alpha, tuple).is_zero();
}

double relation_product_error(const AlgebraicParam& alpha, const RelationTuple& tuple) {
  using Float = boost::multiprecision::number<
      boost::multiprecision::cpp_bin_float<200, boost::multiprecision::digit_base_2>>;
  Float root = sqrt(Float(alpha.field.d));
  Float a = (Float(alpha.p) + Float(alpha.q) * root) / Float(alpha.r);
  Float prod = 1;
  for (auto [n, m] : tuple) {
    if (m == 0) continue;
    Float base = Float(n) + a;
    prod *= pow(base, Float(m));
  }
  return static_cast<double>(abs(prod - 1));
}

RelationAnalysis analyze_relations(const AlgebraicParam& alpha, long N) {
  using Q = boost::multiprecision::cpp_rational;
  std::vector<OrdVector> rows;
  std::map<TagKey, std::size_t> col;
  for (long n = 0; n <= N; ++n) {
    rows.push_back(ord_decompose(alpha.shifted(n), alpha.field));
    for (const auto& [k, e] : rows.back().exps) col.emplace(k, col.size());
  }
  // Relations m satisfy sum_n m_n ord(n) = 0: the kernel of the
  // (tags x n) matrix A with A[k][n] = ord(n + alpha, k).
  const std::size_t K = col.size(), C = rows.size();
  std::vector<std::vector<Q>> A(K, std::vector<Q>(C, Q(0)));
  for (std::size_t n = 0; n < C; ++n)
    for (const auto& [k, e] : rows[n].exps) A[col[k]][n] = Q(e);

  std::vector<std::ptrdiff_t> pivot_of_col(C, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < K; ++c) {
    std::size_t piv = r;
    while (piv < K && A[piv][c] == 0) ++piv;
    if (piv == K) continue;
    std::swap(A[piv], A[r]);
    Q inv = Q(1) / A[r][c];
    for (auto& x : A[r]) x *= inv;
    for (std::size_t i = 0; i < K; ++i) {
      if (i == r || A[i][c] == 0) continue;
      Q f = A[i][c];
      for (std::size_t j = 0; j < C; ++j) A[i][j] -= f * A[r][j];
    }
    pivot_of_col[c] = static_cast<std::ptrdiff_t>(r);
    ++r;
  }
  RelationAnalysis out;
  out.rank = static_cast<int>(r);
  for (std::size_t f = 0; f < C; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    std::vector<Q> v(C, Q(0));
    v[f] = Q(1);
    for (std::size_t c = 0; c < C; ++c)
      if (pivot_of_col[c] >= 0) v[c] = -A[static_cast<std::size_t>(pivot_of_col[c])][f];
    BigInt l = 1;
    for (const Q& x : v) l = lcm(l, denominator(x));
    BigInt g = 0;
    std::vector<BigInt> iv;
    for (const Q& x : v) {
      iv.push_back(numerator(x) * (l / denominator(x)));
      g = gcd(g, BigInt(abs(iv.back())));
    }
    std::vector<long> lv;
    for (const BigInt& x : iv) lv.push_back((x / g).convert_to<long>());
    out.kernel.push_back(std::move(lv));
  }
  return out;
}

}  // namespace hurlab
