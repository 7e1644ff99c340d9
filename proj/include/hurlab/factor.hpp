#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hurlab {

struct FactorBudget {
  std::uint64_t trial_limit = 1'000'000;
  std::uint64_t rho_iterations = 10'000'000;
};

class FactorizationBudgetExceeded : public std::runtime_error {
 public:
  FactorizationBudgetExceeded(boost::multiprecision::cpp_int cofactor)
      : std::runtime_error("factorization budget exceeded; unfactored cofactor " + cofactor.str()),
        cofactor_(std::move(cofactor)) {}
  const boost::multiprecision::cpp_int& cofactor() const { return cofactor_; }

 private:
  boost::multiprecision::cpp_int cofactor_;
};

bool is_prime_u64(std::uint64_t n);

// Prime factorization of |n| (n != 0) as sorted (prime, exponent) pairs.
// Trial division up to budget.trial_limit, then Pollard-Brent rho on the
// 64-bit cofactor. Prime factors must fit in 63 bits.
std::vector<std::pair<std::uint64_t, int>> factorize(const boost::multiprecision::cpp_int& n,
                                                     const FactorBudget& budget = FactorBudget{});

}  // namespace hurlab
