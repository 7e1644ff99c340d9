#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"
#include "hurlab/common.hpp"
#include "hurlab/factor.hpp"
#include "hurlab/qfield.hpp"

using namespace hurlab;

namespace {

// naive trial division, the oracle for factorize
std::vector<std::pair<std::uint64_t, int>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) n /= p, ++e;
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

AlgebraicParam sqrt2_minus_1() { return make_param(2, -1, 1, 1); }

std::vector<AlgebraicParam> sample_params() {
  return {make_param(2, -1, 1, 1), make_param(3, -1, 1, 1), make_param(5, 1, 1, 4), make_param(6, -2, 1, 1),
          make_param(7, -2, 1, 1), make_param(13, -3, 1, 1), make_param(2, 1, 1, 3)};
}

}  // namespace

TEST_CASE("factorize agrees with trial division") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t n = 2 + rng() % 5'000'000;
    CHECK(factorize(BigInt(n)) == trial_factor(n));
  }
  // two 31-bit primes force the rho stage
  const std::uint64_t p = 2147483647ULL, q = 2147483629ULL;
  auto f = factorize(BigInt(p) * q);
  REQUIRE(f.size() == 2);
  CHECK(f[0].first == q);
  CHECK(f[1].first == p);
}

TEST_CASE("factorize budget error carries the cofactor") {
  FactorBudget tiny{100, 10};
  const BigInt n = BigInt(2147483647ULL) * 2147483629ULL;
  try {
    factorize(n, tiny);
    FAIL("expected FactorizationBudgetExceeded");
  } catch (const FactorizationBudgetExceeded& e) {
    CHECK(e.cofactor() == n);
  }
}

TEST_CASE("field allowlist") {
  for (int d : {2, 3, 5, 6, 7, 13}) {
    const FieldDesc F = make_field(d);
    const BigInt n = norm(F, F.fundamental_unit);
    CHECK((n == 1 || n == -1));
    CHECK(F.log_unit() > 0.0);
    CHECK(F.omega_kind == (d % 4 == 1 ? OmegaKind::half : OmegaKind::sqrt_d));
  }
  CHECK_THROWS_AS(make_field(10), DomainError);
  CHECK_THROWS_AS(make_field(4), DomainError);
  CHECK_THROWS_AS(make_field(1), DomainError);
}

TEST_CASE("load_fields validates descriptors") {
  auto m = load_fields(nlohmann::json::parse(R"({"2": {"unit": [1, 1]}, "5": {"unit": [0, 1]}})"));
  CHECK(m.at(2).fundamental_unit == QuadInt{1, 1});
  CHECK(m.at(5).fundamental_unit == QuadInt{0, 1});
  // (1 + sqrt 2)^2 is a unit but not fundamental
  CHECK_THROWS(load_fields(nlohmann::json::parse(R"({"2": {"unit": [3, 2]}})")));
  CHECK_THROWS(load_fields(nlohmann::json::parse(R"({"2": {"unit": [1, 2]}})")));
  CHECK_THROWS(load_fields(nlohmann::json::parse(R"({"10": {"unit": [3, 1]}})")));
}

TEST_CASE("ring operations are multiplicative in the norm") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(-40, 40);
  for (int d : supported_fields()) {
    const FieldDesc F = make_field(d);
    for (int i = 0; i < 100; ++i) {
      const QuadInt x{u(rng), u(rng)}, y{u(rng), u(rng)};
      CHECK(norm(F, mul(F, x, y)) == norm(F, x) * norm(F, y));
      CHECK(conj(F, conj(F, x)) == x);
      CHECK(mul(F, x, y) == mul(F, y, x));
      const double xf = to_double(F, x), yf = to_double(F, y);
      CHECK(to_double(F, mul(F, x, y)) == doctest::Approx(xf * yf).epsilon(1e-9).scale(1.0));
      if (std::abs(xf) > 1e-9) CHECK(sign(F, x) == (xf > 0 ? 1 : -1));
    }
    CHECK(mul(F, unit_power(F, 3), unit_power(F, -3)) == QuadInt{1, 0});
  }
}

TEST_CASE("splitting of small primes in Q(sqrt 2)") {
  const FieldDesc F = make_field(2);
  auto t2 = splitting_type(2, F);
  REQUIRE(t2.size() == 1);
  CHECK(t2[0].splitting == Splitting::ramified);
  CHECK(abs(norm(F, t2[0].generator)) == 2);
  // sqrt 2 up to a unit
  OrdVector v = ord_decompose(FieldElement{QuadInt{0, 1}, 1}, F);
  CHECK(v.at(TagKey{2, 0}) == 1);

  auto t7 = splitting_type(7, F);
  REQUIRE(t7.size() == 2);
  CHECK(t7[0].splitting == Splitting::split);
  for (const auto& t : t7) {
    CHECK(norm(F, t.generator) * norm(F, t.generator) == 49);
    CHECK(sign(F, t.generator) == 1);
  }
  // the two generators are associates of 3 + sqrt 2 and 3 - sqrt 2
  QuadInt q;
  const bool a = try_divide(F, QuadInt{3, 1}, t7[0].generator, q) && abs(norm(F, q)) == 1;
  const bool b = try_divide(F, QuadInt{3, -1}, t7[0].generator, q) && abs(norm(F, q)) == 1;
  CHECK(a != b);

  auto t5 = splitting_type(5, F);
  REQUIRE(t5.size() == 1);
  CHECK(t5[0].splitting == Splitting::inert);
  CHECK(norm(F, t5[0].generator) == 25);

  CHECK_THROWS_AS(splitting_type(9, F), DomainError);
}

TEST_CASE("splitting generators have the right norm in every field") {
  for (int d : supported_fields()) {
    const FieldDesc F = make_field(d);
    for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 97u, 101u}) {
      for (const auto& t : splitting_type(p, F)) {
        const BigInt n = abs(norm(F, t.generator));
        CHECK(sign(F, t.generator) == 1);
        if (t.splitting == Splitting::inert) CHECK(n == BigInt(p) * p);
        else CHECK(n == BigInt(p));
      }
    }
  }
}

TEST_CASE("ord of sqrt 2 - 1 is a pure unit") {
  const AlgebraicParam a = sqrt2_minus_1();
  const OrdVector v = ord_decompose(a.shifted(0), a.field);
  CHECK(v.exps.size() == 1);
  CHECK(v.unit() == -1);
  const OrdVector w = ord_decompose(a.shifted(1), a.field);
  CHECK(w.unit() == 0);
  CHECK(w.at(TagKey{2, 0}) == 1);
  CHECK_THROWS_AS(ord_decompose(FieldElement{QuadInt{1, -1}, 1}, a.field), DomainError);
}

TEST_CASE("reconstruction for n up to 1000") {
  std::mt19937_64 rng(5);
  for (const auto& a : sample_params()) {
    for (int i = 0; i < 25; ++i) {
      const long n = static_cast<long>(rng() % 1001);
      const FieldElement y = a.shifted(n);
      const OrdVector v = ord_decompose(y, a.field);
      CHECK(equal(a.field, reconstruct(v, a.field), y));
    }
  }
}

TEST_CASE("ord is additive") {
  std::mt19937_64 rng(6);
  const auto ps = sample_params();
  for (int i = 0; i < 100; ++i) {
    const auto& a = ps[i % ps.size()];
    const FieldElement x = a.shifted(static_cast<long>(rng() % 300));
    const FieldElement y = a.shifted(static_cast<long>(rng() % 300));
    OrdVector sum = ord_decompose(x, a.field);
    sum += ord_decompose(y, a.field);
    CHECK(ord_decompose(mul(a.field, x, y), a.field) == sum);
  }
}

TEST_CASE("OrdVector json roundtrip") {
  const AlgebraicParam a = make_param(5, 1, 1, 4);
  for (long n = 0; n < 30; ++n) {
    const OrdVector v = ord_decompose(a.shifted(n), a.field);
    const auto j = v.to_json();
    CHECK(j.contains("primes"));
    CHECK(j.contains("unit"));
    CHECK(OrdVector::from_json(j) == v);
  }
}

TEST_CASE("detect_relation examples") {
  const AlgebraicParam a = sqrt2_minus_1();
  CHECK(detect_relation(a, {{0, 1}, {2, 1}}));
  CHECK_FALSE(detect_relation(a, {{0, 1}, {1, 1}}));
  CHECK(detect_relation(a, {{0, 0}, {3, 0}, {7, 0}}));
  CHECK(detect_relation(a, {}));
  CHECK(detect_relation(make_param(3, -1, 1, 1), {{0, 1}, {0, -1}}) == true);
}

TEST_CASE("detected relations hold in 200-bit arithmetic") {
  std::mt19937_64 rng(8);
  const AlgebraicParam a = sqrt2_minus_1();
  int found = 0;
  // lattice relations among n <= 40 and random combinations of them
  const RelationAnalysis ra = analyze_relations(a, 40);
  for (const auto& k : ra.kernel) {
    RelationTuple t;
    for (std::size_t n = 0; n < k.size(); ++n)
      if (k[n]) t.emplace_back(static_cast<long>(n), k[n]);
    REQUIRE(detect_relation(a, t));
    CHECK(relation_product_error(a, t) < 1e-30);
    ++found;
  }
  CHECK(found >= 1);
  for (int i = 0; i < 50; ++i) {
    RelationTuple t{{static_cast<long>(rng() % 20), 1}, {static_cast<long>(20 + rng() % 20), -1}};
    if (detect_relation(a, t)) CHECK(relation_product_error(a, t) < 1e-30);
    else CHECK(relation_product_error(a, t) > 1e-10);
  }
}

TEST_CASE("relation rank for sqrt 2 - 1") {
  const AlgebraicParam a = sqrt2_minus_1();
  const RelationAnalysis r = analyze_relations(a, 3);
  // a and 2 + a are units, 1 + a = sqrt 2 and 3 + a = sqrt 2 (1 + sqrt 2)
  CHECK(r.rank == 2);
  REQUIRE(r.kernel.size() == 2);
  for (const auto& k : r.kernel) {
    REQUIRE(k.size() == 4);
    RelationTuple t;
    for (long n = 0; n < 4; ++n)
      if (k[n] != 0) t.emplace_back(n, k[n]);
    CHECK(detect_relation(a, t));
    CHECK(relation_product_error(a, t) < 1e-50);
  }
  CHECK(detect_relation(a, {{1, 1}, {2, 1}, {3, -1}}));
}

TEST_CASE("make_param rejects bad literals") {
  CHECK_THROWS_AS(make_param(2, 1, 0, 2), DomainError);
  CHECK_THROWS_AS(make_param(2, 1, 1, 1), DomainError);  // 1 + sqrt 2 > 1
  CHECK_THROWS_AS(make_param(2, 0, 1, 0), DomainError);
  const AlgebraicParam a = make_param(2, 1, -1, -1);
  CHECK(a.float_value == doctest::Approx(std::sqrt(2.0) - 1.0));
  CHECK(a.literal() == "sqrt:2:-1:1:1");
}
