#pragma once

// Rademacher random multiplicative functions: reproducible sign draws, the
// rough harmonic sum and its moments, the Euler-product and divisor-sum
// identities, and an exhaustive expectation oracle over small prime sets.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace qcs {

using Rational = boost::multiprecision::cpp_rational;

/// X(p) = ±1 for every prime p, extended completely multiplicatively.
/// Signs for primes up to prime_limit are materialized; others are drawn on
/// demand from a counter-based generator keyed by (seed, p), so every value
/// is reproducible from the seed alone. Explicit overrides take precedence.
class SignAssignment {
 public:
  explicit SignAssignment(std::uint64_t seed, std::uint64_t prime_limit = 1);
  SignAssignment(std::map<std::uint64_t, int> overrides, std::uint64_t fallback_seed);

  std::uint64_t seed() const { return seed_; }
  const std::map<std::uint64_t, int>& prime_signs() const { return signs_; }

  int at_prime(std::uint64_t p) const;
  /// X(n) by trial-division factorization; X(1) = 1.
  int operator()(std::uint64_t n) const;

 private:
  std::uint64_t seed_;
  std::map<std::uint64_t, int> signs_;
};

/// The generator behind SignAssignment: a fair ±1 for (seed, p).
int hashed_sign(std::uint64_t seed, std::uint64_t p);

SignAssignment sample_signs(std::uint64_t prime_limit, std::uint64_t seed);

/// Σ_{1<n<=N, P^-(n)>y} X(n)/n.
double rough_sum(const SignAssignment& signs, double y, std::uint64_t N);

/// The y-rough integers 1 < n <= N with links n = p·m (p = P^-(n), m rough
/// or 1), so X over the whole list follows from the prime signs in one pass.
class RoughIndex {
 public:
  RoughIndex(double y, std::uint64_t N);

  double y() const { return y_; }
  std::uint64_t N() const { return N_; }
  const std::vector<std::uint32_t>& numbers() const { return n_; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

  /// Partial sums Σ X(n)/n over n <= bound for each bound (ascending), using
  /// X(p) = sign_of(prime index).
  void sums(const std::function<int(std::uint32_t)>& sign_of, const std::vector<std::uint64_t>& bounds,
            std::vector<double>& out, std::vector<std::int8_t>& scratch) const;

 private:
  double y_;
  std::uint64_t N_;
  std::vector<std::uint32_t> n_;
  std::vector<std::uint32_t> prime_slot_;  ///< index into primes_ of P^-(n)
  std::vector<std::int32_t> cofactor_;     ///< index into n_ of n/P^-(n), or -1 when it is 1
  std::vector<std::uint32_t> primes_;
};

struct MomentEstimate {
  double y = 0.0;
  unsigned k = 0;
  std::uint64_t N = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double standard_error = 0.0;  ///< jackknife
  double bias_estimate = 0.0;   ///< mean of |S_{2N}|^{2k} - |S_N|^{2k} on the bias trials
  std::uint64_t bias_trials = 0;
};

/// Monte Carlo mean of |Σ_{1<n<=N, P^-(n)>y} X(n)/n|^{2k}. N = 0 selects y·10^3.
MomentEstimate moment_mc(double y, unsigned k, std::uint64_t N, std::uint64_t trials, std::uint64_t seed,
                         unsigned workers = 1);

/// E|Σ_{1<n<=N, P^-(n)>y} X(n)/n|^2 exactly: Σ over squarefree kernels s of
/// (Σ_{n: kernel(n)=s} 1/n)^2.
double moment_diagonal_k1(double y, std::uint64_t N);

struct ProductValue {
  double value = 0.0;
  double tail_bound = 0.0;  ///< the full product lies in [value, value + tail_bound]
  std::uint64_t cutoff = 0;
};

/// Π_{y<p<=cutoff} ½((1-1/p)^{-k} + (1+1/p)^{-k}) = E Π_{y<p<=cutoff} (1 - X(p)/p)^{-k}.
ProductValue moment_exact_product(double y, unsigned k, std::uint64_t cutoff);

/// M_y(k) = E(L - 1)^{2k} for L = Π_{y<p<=cutoff} (1 - X(p)/p)^{-1}, by the
/// binomial expansion over the exact products with 50-digit arithmetic.
double moment_exact(double y, unsigned k, std::uint64_t cutoff);

/// Σ_{1<=n<=N, P^-(n)>y, P^+(n)<=prime_cap} d_k(n^2)/n^2. prime_cap = 0 means no cap.
double divisor_square_sum(unsigned k, double y, std::uint64_t N, std::uint64_t prime_cap = 0);

struct RandomL1Moment {
  unsigned k = 0;
  std::uint64_t cutoff = 0;
  double value = 0.0;
  double log_value = 0.0;
  double reference = 0.0;  ///< k log log k + kγ + (k/log k)(B_0 - 1)
  bool cutoff_warning = false;  ///< cutoff < k log k
};

/// E L(1, X)^k truncated to primes <= cutoff.
RandomL1Moment l1_random_moment(unsigned k, std::uint64_t cutoff);

/// Exact mean of functional over all 2^|primes| sign choices. Throws
/// std::invalid_argument when the functional is seen to depend on a prime
/// outside the set (probed by re-evaluating with different signs there).
Rational brute_force_expectation(const std::vector<std::uint64_t>& primes,
                                 const std::function<Rational(const SignAssignment&)>& functional);

}  // namespace qcs
