#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "oracles.hpp"
#include "qcs/arith.hpp"
#include "qcs/constants.hpp"
#include "qcs/positivity.hpp"

using namespace qcs;
using boost::multiprecision::cpp_rational;

namespace {

/// λ(p) as an exact rational, scanning S_p(n) from the top down.
cpp_rational oracle_lambda(std::uint64_t p) {
  std::vector<long> S(p);
  long s = 0;
  for (std::uint64_t n = 0; n < p; ++n) S[n] = (s += oracle::legendre(n, p));
  cpp_rational acc = 0;
  for (std::uint64_t n = p; n-- > 0;)
    if (S[n] > 0) acc += cpp_rational(1, static_cast<long long>(p));
  return acc;
}

}  // namespace

TEST_CASE("lambda examples") {
  const auto r3 = lambda_measure(3);
  CHECK(r3.positive == 1);
  CHECK(r3.lambda == doctest::Approx(1.0 / 3));
  const auto r7 = lambda_measure(7);
  CHECK(r7.positive == 5);
  CHECK(r7.zeros == 2);
  CHECK(r7.residue_class == 7);
  const auto r11 = lambda_measure(11);
  CHECK(r11.positive == 7);
  CHECK(r11.zeros == 4);
  CHECK(r11.lambda == doctest::Approx(7.0 / 11));
  CHECK_THROWS_AS(lambda_measure(2), std::invalid_argument);
  CHECK_THROWS_AS(lambda_measure(15), std::invalid_argument);
}

TEST_CASE("lambda agrees with a rational recount on random primes") {
  const auto primes = primes_in_range(3, 20000);
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 200; ++i) {
    const auto p = primes[rng() % primes.size()];
    const auto r = lambda_measure(p);
    CHECK(cpp_rational(static_cast<long long>(r.positive), static_cast<long long>(p)) == oracle_lambda(p));
    CHECK(r.positive + r.negative + r.zeros == p);
  }
}

TEST_CASE("half period kernel") {
  LambdaWorkspace ws;
  for (const auto p : primes_in_range(3, 30000)) {
    if (p % 4 != 3) continue;
    const auto r = lambda_half_period(p, ws);
    CHECK(r == lambda_measure(p));
    CHECK(r.positive >= 1);
    CHECK(r.positive <= p - 1);
  }
  CHECK_THROWS(lambda_half_period(13, ws));
}

TEST_CASE("survey") {
  const auto s = positivity_survey(100);
  CHECK(s.records.front().p == 3);
  CHECK(s.records.size() == 24);
  double m = 1;
  for (const auto& r : s.records)
    if (r.p % 4 == 3) m = std::min(m, r.lambda);
  CHECK(s.min_lambda == m);
  CHECK(s.min_lambda <= 1.0 / 3);

  const auto big = positivity_survey(100000, 2);
  CHECK(big.min_lambda > 0.02);
  std::uint64_t hist = 0;
  for (const auto c : big.histogram) hist += c;
  std::uint64_t n3 = 0;
  for (const auto& r : big.records) {
    if (r.p % 4 == 1) CHECK(r.positive == r.negative);
    if (r.p % 4 == 3) ++n3;
  }
  CHECK(hist == n3);
  CHECK(lambda_population(100000, 3) == lambda_population(100000, 1));
  CHECK_THROWS(positivity_survey(5));
}

TEST_CASE("twist weight") {
  CHECK(twist_weight(1) == 1);
  CHECK(twist_weight(2) == -1);
  CHECK(twist_weight(3) == -1);
  CHECK(twist_weight(9) == 1);
  CHECK(twist_weight(7) == 1);
  for (std::uint64_t m = 1; m <= 60; ++m)
    for (std::uint64_t n = 1; n <= 60; ++n) CHECK(twist_weight(m * n) == twist_weight(m) * twist_weight(n));
  CHECK_THROWS(twist_weight(0));
}

TEST_CASE("U kernel") {
  const auto u0 = u_kernel(0.0, 1000000);
  CHECK(std::abs(u0.value - constants::pi / (4 * std::sqrt(3.0))) <= u0.truncation_bound);
  CHECK(u0.value == doctest::Approx(0.4534).epsilon(1e-3));
  CHECK(u_kernel_threshold() == doctest::Approx(0.22672).epsilon(1e-4));

  const auto a = u_kernel(0.2, 1000000);
  CHECK(a.value - u_kernel_threshold() > a.truncation_bound);
  CHECK(u_kernel(0.8, 1000000).value == doctest::Approx(a.value).epsilon(1e-12));

  for (int j = 1; j < 1024; j += 17) {
    const double al = j / 1024.0;
    if (std::min(al, 1 - al) >= 1.0 / 3) continue;
    // The margin is smallest near 4/15 (about 3.8e-4), so N must push the bound below it.
    const auto v = u_kernel(al, 10000000);
    CHECK(v.value - u_kernel_threshold() > v.truncation_bound);
  }
  CHECK_THROWS(u_kernel(0.1, 999));
}

TEST_CASE("sign prescriptions") {
  const auto p3 = prescribe_signs(3, 3, constant_signs(3, 1));
  CHECK(p3.Q == 24);
  CHECK(p3.residue_mod8 == 7);
  CHECK(std::gcd(p3.b, p3.Q) == 1);
  int seen = 0;
  for (std::uint64_t p = p3.b; seen < 10; p += p3.Q) {
    if (!oracle::is_prime(p)) continue;
    ++seen;
    CHECK(p % 4 == 3);
    CHECK(oracle::kronecker(2, p) == 1);
    CHECK(oracle::legendre(3, p) == 1);
    CHECK(p3.satisfied_by(p));
  }

  CHECK(prescribe_signs(7, 3, constant_signs(7, 1)).Q == 840);
  CHECK(prescribe_signs(3, 3, constant_signs(3, -1)).residue_mod8 == 3);
  CHECK(prescribe_signs(3, 1, constant_signs(3, 1)).residue_mod8 == 1);
  CHECK(prescribe_signs(3, 1, constant_signs(3, -1)).residue_mod8 == 5);

  const auto p13 = prescribe_signs(13, 1, {{2, -1}, {3, 1}, {5, -1}, {7, 1}, {11, 1}, {13, -1}});
  CHECK(static_cast<double>(p13.Q) <= std::exp(1.3 * 13));
  seen = 0;
  for (std::uint64_t p = p13.b; seen < 20; p += p13.Q) {
    if (!oracle::is_prime(p)) continue;
    ++seen;
    for (const auto& [q, e] : p13.eps) CHECK(oracle::kronecker(static_cast<std::int64_t>(q), p) == e);
    CHECK(p % 4 == 1);
  }

  CHECK_THROWS(prescribe_signs(7, 3, {{2, 1}, {3, 1}}));
  CHECK_THROWS(prescribe_signs(7, 2, constant_signs(7, 1)));
  CHECK_THROWS_AS(prescribe_signs(60, 3, constant_signs(60, 1)), std::overflow_error);
}

TEST_CASE("class search") {
  const auto c3 = find_primes_in_class(200000, prescribe_signs(3, 3, constant_signs(3, 1)));
  CHECK(c3.expected_density == 0.125);
  CHECK(c3.ratio == doctest::Approx(1).epsilon(0.1));

  const auto pr = prescribe_signs(7, 3, {{2, 1}, {3, -1}, {5, 1}, {7, -1}});
  const auto c7 = find_primes_in_class(1000000, pr);
  CHECK(c7.pi_x == 78498);
  CHECK(c7.expected_density == 1.0 / 32);
  CHECK(c7.ratio >= 0.85);
  CHECK(c7.ratio <= 1.15);
  for (const auto p : c7.primes) {
    CHECK(p % 4 == 3);
    for (const auto& [q, e] : pr.eps) CHECK(oracle::kronecker(static_cast<std::int64_t>(q), p) == e);
  }
  CHECK(find_primes_in_class(10, pr).primes.empty());
}

TEST_CASE("extremal searches move the mean in the prescribed direction") {
  const auto pop = lambda_population(300000, 2);
  ExtremalParams large;
  large.y = 7;
  const auto L = extremal_search(300000, large, pop);
  CHECK(L.diagnostic.empty());
  CHECK(L.gap > 0);
  CHECK(L.ranked.front().lambda >= L.ranked.back().lambda);
  REQUIRE(L.T.has_value());
  CHECK(*L.T == doctest::Approx(1 / (1 - L.ranked.front().lambda)));

  ExtremalParams small;
  small.mode = ExtremalMode::small;
  small.H = 3;
  small.y0 = 7;
  const auto S = extremal_search(300000, small, pop);
  CHECK(S.gap < 0);
  CHECK(S.ranked.front().lambda <= S.ranked.back().lambda);
  for (const auto& r : S.ranked) CHECK(r.residue_class == 3);

  ExtremalParams degenerate;
  degenerate.y = 2;
  const auto D = extremal_search(3000, degenerate, 1);
  for (const auto& r : D.ranked) CHECK(r.p % 8 == 7);
  std::size_t n7 = 0;
  for (const auto p : primes_in_range(3, 3000)) n7 += p % 8 == 7;
  CHECK(D.ranked.size() == n7);

  const auto none = extremal_search(100, large, std::vector<PositivityRecord>{});
  CHECK(none.ranked.empty());
  CHECK_FALSE(none.diagnostic.empty());
  small.H = 7;
  CHECK_THROWS(extremal_search(1000, small, 1));
}
