#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "oracles.hpp"
#include "qcs/constants.hpp"
#include "qcs/rmf.hpp"

using namespace qcs;

namespace {

std::map<std::uint64_t, int> all_plus(std::uint64_t limit) {
  std::map<std::uint64_t, int> m;
  for (std::uint64_t p = 2; p <= limit; ++p)
    if (oracle::is_prime(p)) m[p] = 1;
  return m;
}

bool smooth_over(std::uint64_t n, const std::vector<std::uint64_t>& primes) {
  for (const auto p : primes)
    while (n % p == 0) n /= p;
  return n == 1;
}

/// Σ over m, n in S with mn a square of 1/(mn).
Rational diagonal_square(const std::vector<std::uint64_t>& S) {
  Rational r = 0;
  for (const auto m : S)
    for (const auto n : S) {
      const auto mn = m * n;
      const auto s = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(mn))));
      if (s * s == mn) r += Rational(1, static_cast<long long>(mn));
    }
  return r;
}

}  // namespace

TEST_CASE("sign assignments") {
  const auto s = sample_signs(1000, 42);
  CHECK(s(1) == 1);
  CHECK(s(4) == 1);
  for (std::uint64_t n = 1; n <= 300; ++n) CHECK(s(n * n) == 1);
  CHECK(s(6) == s.at_prime(2) * s.at_prime(3));
  CHECK(s(1009 * 1013) == s.at_prime(1009) * s.at_prime(1013));
  CHECK(sample_signs(1000, 42).prime_signs() == s.prime_signs());
  CHECK(SignAssignment(42)(1009) == s(1009));

  double mean = 0;
  for (std::uint64_t seed = 0; seed < 100000; ++seed) mean += hashed_sign(seed, 2);
  CHECK(std::abs(mean / 1e5) < 0.01);

  const SignAssignment o({{2, -1}, {5, 1}}, 9);
  CHECK(o.at_prime(2) == -1);
  CHECK(o(10) == -1);
}

TEST_CASE("rough sums") {
  const auto s = sample_signs(200, 3);
  CHECK(rough_sum(s, 100, 100) == 0.0);
  double expect = 0;
  for (std::uint64_t p = 11; p <= 100; ++p)
    if (oracle::is_prime(p)) expect += s.at_prime(p) / static_cast<double>(p);
  CHECK(rough_sum(s, 10, 100) == doctest::Approx(expect).epsilon(1e-14));

  // With X = 1 only the primes in (10, 100] contribute.
  const SignAssignment plus(all_plus(200), 1);
  CHECK(rough_sum(plus, 10, 100) == doctest::Approx(0.626627).epsilon(1e-6));

  // Composite rough terms from 121 on.
  double with121 = 0;
  for (std::uint64_t n = 11; n <= 130; ++n) {
    bool rough = true;
    for (std::uint64_t p = 2; p <= 10; ++p) rough = rough && n % p != 0;
    if (rough) with121 += s(n) / static_cast<double>(n);
  }
  CHECK(rough_sum(s, 10, 130) == doctest::Approx(with121).epsilon(1e-14));

  const RoughIndex idx(10, 130);
  std::vector<double> out;
  std::vector<std::int8_t> scratch;
  idx.sums([&](std::uint32_t slot) { return s.at_prime(idx.primes()[slot]); }, {100, 130}, out, scratch);
  CHECK(out[0] == doctest::Approx(expect).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(with121).epsilon(1e-14));
}

TEST_CASE("brute force expectation examples") {
  const std::vector<std::uint64_t> p23{2, 3};
  CHECK(brute_force_expectation(p23, [](const SignAssignment& X) { return Rational(X(6)); }) == 0);
  CHECK(brute_force_expectation({2}, [](const SignAssignment& X) -> Rational {
          const Rational b = 1 - Rational(X.at_prime(2), 2);
          return 1 / (b * b * b);
        }) == Rational(112, 27));
  CHECK(Rational(112, 27) == (Rational(8) + Rational(8, 27)) / 2);

  std::vector<std::uint64_t> S;
  for (std::uint64_t n = 1; n <= 10; ++n)
    if (smooth_over(n, p23)) S.push_back(n);
  const auto sq = brute_force_expectation(p23, [&](const SignAssignment& X) -> Rational {
    Rational s = 0;
    for (const auto n : S) s += Rational(X(n), static_cast<long long>(n));
    return s * s;
  });
  CHECK(sq == diagonal_square(S));

  CHECK_THROWS_AS(brute_force_expectation(p23, [](const SignAssignment& X) { return Rational(X(5)); }),
                  std::invalid_argument);
  CHECK_THROWS_AS(brute_force_expectation({4}, [](const SignAssignment&) { return Rational(1); }), std::invalid_argument);
}

TEST_CASE("E-square identity over small prime sets") {
  const std::vector<std::vector<std::uint64_t>> sets{{2}, {3, 5}, {2, 3, 5}, {2, 3, 5, 7}, {3, 7, 11}};
  for (const auto& P : sets) {
    for (std::uint64_t N : {10u, 50u, 200u}) {
      std::vector<std::uint64_t> S;
      for (std::uint64_t n = 1; n <= N; ++n)
        if (smooth_over(n, P)) S.push_back(n);
      const auto e = brute_force_expectation(P, [&](const SignAssignment& X) -> Rational {
        Rational s = 0;
        for (const auto n : S) s += Rational(X(n), static_cast<long long>(n));
        return s * s;
      });
      CHECK(e == diagonal_square(S));
    }
  }
}

TEST_CASE("exact products and divisor sums") {
  CHECK(moment_exact_product(10, 0, 1000).value == 1.0);
  const auto p = moment_exact_product(10, 2, 1000);
  CHECK(std::abs(p.value - divisor_square_sum(2, 10, 10000000000ull, 1000)) < 1e-9);
  // Truncated sums approach the product from below.
  double prev = 0;
  for (std::uint64_t N : {100ull, 10000ull, 1000000ull, 100000000ull}) {
    const double s = divisor_square_sum(2, 10, N, 1000);
    CHECK(s >= prev);
    CHECK(s <= p.value);
    prev = s;
  }
  CHECK(divisor_square_sum(3, 10, 1) == 1.0);

  // k = 2, no cut, N = 1000: Σ τ(n²)/n² directly.
  double direct = 0;
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    std::uint64_t tau = 1, m = n;
    for (std::uint64_t q = 2; q <= m; ++q) {
      std::uint64_t e = 0;
      while (m % q == 0) m /= q, ++e;
      tau *= 2 * e + 1;
    }
    direct += static_cast<double>(tau) / static_cast<double>(n * n);
  }
  CHECK(divisor_square_sum(2, 1, 1000) == doctest::Approx(direct).epsilon(1e-13));

  // The product bracket: [value, value + tail_bound] contains a longer product.
  const auto shortp = moment_exact_product(10, 3, 10000);
  const auto longp = moment_exact_product(10, 3, 1000000);
  CHECK(longp.value >= shortp.value);
  CHECK(longp.value <= shortp.value + shortp.tail_bound);

  // Decreasing in y.
  for (unsigned k : {1u, 2u, 4u}) CHECK(moment_exact(50, k, 100000) > moment_exact(200, k, 100000));
  // log E L^k ≤ c k²/(y log y): fitted c stays bounded.
  double cmax = 0;
  for (double y : {100.0, 1000.0})
    for (unsigned k = 1; k <= 8; ++k) cmax = std::max(cmax, std::log(moment_exact_product(y, k, 1000000).value) * y * std::log(y) / (k * k));
  CHECK(cmax < 1.0);
}

TEST_CASE("moment_exact agrees with the binomial expansion of the product oracle") {
  // k = 1: E(L-1)² = E L² - 2 E L + 1.
  const double e1 = moment_exact_product(10, 1, 5000).value, e2 = moment_exact_product(10, 2, 5000).value;
  CHECK(moment_exact(10, 1, 5000) == doctest::Approx(e2 - 2 * e1 + 1).epsilon(1e-9));
  CHECK(moment_exact(10, 2, 5000) > 0);
}

TEST_CASE("Monte Carlo moments") {
  const auto m = moment_mc(10, 1, 10000, 4000, 11);
  const double exact = moment_diagonal_k1(10, 10000);
  CHECK(std::abs(m.estimate - exact) <= 4 * m.standard_error);
  CHECK(m.N == 10000);
  CHECK(m.bias_trials > 0);
  CHECK(moment_mc(10, 1, 10000, 4000, 11, 3).estimate == m.estimate);

  const auto a = moment_mc(10, 1, 5000, 1000, 5);
  const auto b = moment_mc(10, 1, 5000, 4000, 5);
  CHECK(b.standard_error / a.standard_error == doctest::Approx(0.5).epsilon(0.3));

  const auto hi = moment_mc(50, 3, 0, 400, 8);
  CHECK(hi.N == 50000);
  CHECK(hi.estimate <= 10 * std::pow(6.0 / (std::numbers::e * 50 * std::log(50.0)), 3));
  CHECK_THROWS(moment_mc(10, 1, 1000, 10, 1));
}

TEST_CASE("diagonal k = 1 by squarefree kernels") {
  // Group the 3-rough n <= 60 by squarefree kernel.
  double direct = 0;
  std::map<std::uint64_t, double> by_kernel;
  for (std::uint64_t n = 2; n <= 60; ++n) {
    if (n % 2 == 0 || n % 3 == 0) continue;
    std::uint64_t m = n, kernel = 1;
    for (std::uint64_t p = 5; p <= m; ++p) {
      int e = 0;
      while (m % p == 0) m /= p, ++e;
      if (e & 1) kernel *= p;
    }
    by_kernel[kernel] += 1.0 / static_cast<double>(n);
  }
  for (const auto& [k, v] : by_kernel) direct += v * v;
  CHECK(moment_diagonal_k1(3, 60) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("random L(1, X) moments") {
  CHECK(l1_random_moment(0, 1000).value == 1.0);
  const auto m2 = l1_random_moment(2, 1000000);
  CHECK(std::isfinite(m2.value));
  CHECK(m2.value > 1);
  CHECK_FALSE(m2.cutoff_warning);
  CHECK(l1_random_moment(8, 10).cutoff_warning);
  // Measured leading-term ratios: 0.978, 0.960, 0.961.
  for (unsigned k : {8u, 16u, 32u}) {
    const auto r = l1_random_moment(k, 10000000);
    const double kk = k;
    const double ratio = r.log_value / (kk * std::log(std::log(kk)) + kk * constants::euler_gamma);
    CHECK(std::abs(ratio - 1) < 0.05);
    CHECK(std::abs(r.log_value / r.reference - 1) < 0.05);
  }
}
