#pragma once

// Integer arithmetic: least-factor sieve, Kronecker symbol, fundamental
// discriminants, friability tests and divisor functions.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcs {

/// Immutable least-prime-factor table on [0, limit]. Shareable across threads.
class PrimeTable {
 public:
  explicit PrimeTable(std::uint32_t limit);

  std::uint32_t limit() const { return limit_; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

  /// smallest_factor(n) for 2 <= n <= limit; 0 and 1 map to 0 and 1.
  std::uint32_t smallest_factor(std::uint32_t n) const {
    check(n);
    return spf_[n];
  }
  bool is_prime(std::uint32_t n) const { return n >= 2 && smallest_factor(n) == n; }

  /// P^-(n). Rejects n < 2.
  std::uint32_t smallest_prime_factor(std::uint32_t n) const;
  /// P^+(n). Rejects n < 2.
  std::uint32_t largest_prime_factor(std::uint32_t n) const;
  /// P^+(n) <= y, with the convention that 1 is y-smooth for every y.
  bool is_smooth(std::uint32_t n, double y) const;
  /// P^-(n) > y, with the convention that 1 is y-rough for every y.
  bool is_rough(std::uint32_t n, double y) const;

  /// π(x) for x <= limit.
  std::size_t prime_count(std::uint32_t x) const;

  /// Prime factorization as (prime, exponent) pairs in increasing order.
  std::vector<std::pair<std::uint32_t, int>> factorize(std::uint32_t n) const;

  /// Table of P^+(n) for 0 <= n <= bound (entries 0 and 1 are 1).
  std::vector<std::uint32_t> largest_factor_table(std::uint32_t bound) const;

 private:
  void check(std::uint32_t n) const {
    if (n > limit_) throw std::out_of_range("PrimeTable: " + std::to_string(n) + " exceeds limit " + std::to_string(limit_));
  }

  std::uint32_t limit_;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint32_t> spf_;
};

/// Sieve of all primes up to limit. Throws std::invalid_argument for limit < 2.
PrimeTable sieve_primes(std::uint64_t limit);

/// Primes in [lo, hi] by a segmented sieve; used above the single-table range.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

/// Kronecker symbol (d/n), full extension including n = 0 and negative d.
int kronecker(std::int64_t d, std::uint64_t n);

/// Jacobi symbol (a/m) for odd m >= 1.
int jacobi(std::uint64_t a, std::uint64_t m);

bool is_squarefree(std::uint64_t n);

/// True iff d is a fundamental discriminant other than 1. Throws
/// std::domain_error for d = 0.
bool is_fundamental(std::int64_t d);

enum class SignFilter { negative, positive, both };

SignFilter parse_sign(const std::string& s);
std::string to_string(SignFilter s);

/// A validated fundamental discriminant d with |d| >= 3.
class FundamentalDiscriminant {
 public:
  /// Throws std::invalid_argument when d is not fundamental.
  explicit FundamentalDiscriminant(std::int64_t d);

  std::int64_t value() const { return d_; }
  std::uint64_t modulus() const { return static_cast<std::uint64_t>(d_ < 0 ? -d_ : d_); }
  bool negative() const { return d_ < 0; }
  /// χ_d is even iff d > 0.
  bool even() const { return d_ > 0; }
  /// χ_d(-1).
  int parity_sign() const { return d_ > 0 ? 1 : -1; }

  friend bool operator==(const FundamentalDiscriminant&, const FundamentalDiscriminant&) = default;

 private:
  struct Unchecked {};
  FundamentalDiscriminant(std::int64_t d, Unchecked) : d_(d) {}
  friend std::vector<FundamentalDiscriminant> enumerate_fundamental(std::uint64_t, SignFilter);
  friend std::vector<FundamentalDiscriminant> prime_discriminants(std::uint64_t, SignFilter);

  std::int64_t d_;
};

/// All fundamental d with 3 <= |d| <= x of the requested sign, sorted by |d|
/// and, for equal |d|, negative first.
std::vector<FundamentalDiscriminant> enumerate_fundamental(std::uint64_t x, SignFilter sign);

/// Discriminants ±p for odd primes p <= x: d = p when p ≡ 1 mod 4 and
/// d = -p when p ≡ 3 mod 4, filtered by sign, sorted by |d|.
std::vector<FundamentalDiscriminant> prime_discriminants(std::uint64_t x, SignFilter sign);

/// Factorization by trial division (n up to ~1e14 in reasonable time).
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

/// Binomial coefficient C(n, k); throws std::overflow_error past 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// d_k(n) from the exponents of n's prime factorization.
std::uint64_t divisor_fn_from_exponents(unsigned k, std::span<const int> exponents);

/// d_k(n): number of ordered k-tuples of positive integers with product n.
/// Throws std::invalid_argument for k = 0 or n = 0, std::overflow_error on overflow.
std::uint64_t divisor_fn(unsigned k, std::uint64_t n);

}  // namespace qcs
