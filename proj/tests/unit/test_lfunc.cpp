#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcs/constants.hpp"
#include "qcs/lfunc.hpp"

using namespace qcs;

namespace {

/// Σ_{n<=N} (d/n)/n, plain Kahan sum over the oracle symbol.
double oracle_series(std::int64_t d, std::uint64_t N) {
  double s = 0, c = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const double t = oracle::kronecker(d, n) / static_cast<double>(n) - c;
    const double u = s + t;
    c = (u - s) - t;
    s = u;
  }
  return s;
}

}  // namespace

TEST_CASE("odd identity examples") {
  const double pi = constants::pi;
  CHECK(l1_identity_odd(FundamentalDiscriminant(-3)).value == doctest::Approx(pi / (3 * std::sqrt(3.0))).epsilon(1e-14));
  CHECK(l1_identity_odd(FundamentalDiscriminant(-3)).value == doctest::Approx(0.604600).epsilon(1e-6));
  CHECK(l1_identity_odd(FundamentalDiscriminant(-4)).value == doctest::Approx(pi / 4).epsilon(1e-14));
  // h(-7) = 1, w = 2: L = π/√7.
  CHECK(l1_identity_odd(FundamentalDiscriminant(-7)).value == doctest::Approx(pi / std::sqrt(7.0)).epsilon(1e-14));
  CHECK(l1_identity_odd(FundamentalDiscriminant(-7)).value == doctest::Approx(oracle_series(-7, 1000000)).epsilon(1e-5));
  CHECK(l1_identity_odd(FundamentalDiscriminant(-7)).method == LMethod::identity);
  CHECK_THROWS_AS(l1_identity_odd(FundamentalDiscriminant(5)), std::invalid_argument);
}

TEST_CASE("class number formula for d < 0") {
  // h(d) = w √|d| L / (2π) must be an integer: 23 -> 3, 47 -> 5, 71 -> 7, 163 -> 1, 4 -> 1 (w = 4).
  const std::pair<std::int64_t, int> cases[] = {{-23, 3}, {-47, 5}, {-71, 7}, {-163, 1}, {-84, 4}, {-420, 8}};
  for (const auto& [d, h] : cases) {
    const double L = l1_identity_odd(FundamentalDiscriminant(d)).value;
    CHECK(2.0 * std::sqrt(static_cast<double>(-d)) * L / (2 * constants::pi) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("even closed form examples") {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(l1_closed_even(FundamentalDiscriminant(5)).value == doctest::Approx(2 / std::sqrt(5.0) * std::log(phi)).epsilon(1e-14));
  CHECK(l1_closed_even(FundamentalDiscriminant(5)).value == doctest::Approx(0.430409).epsilon(1e-6));
  CHECK(l1_closed_even(FundamentalDiscriminant(8)).value == doctest::Approx(std::log(1 + std::sqrt(2.0)) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(l1_closed_even(FundamentalDiscriminant(8)).value == doctest::Approx(0.623225).epsilon(1e-6));
  // h(12) = 1, fundamental unit 2 + √3.
  CHECK(l1_closed_even(FundamentalDiscriminant(12)).value == doctest::Approx(std::log(2 + std::sqrt(3.0)) / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(l1_closed_even(FundamentalDiscriminant(12)).value == doctest::Approx(0.760346).epsilon(1e-6));
  CHECK(l1_closed_even(FundamentalDiscriminant(12)).value == doctest::Approx(oracle_series(12, 1000000)).epsilon(1e-5));
}

TEST_CASE("series examples") {
  const auto s = l1_series(FundamentalDiscriminant(-3), Twist::none, 100000, 1e-4);
  CHECK(std::abs(s.value - 0.6046) < 1e-4);
  CHECK(s.method == LMethod::series);
  CHECK(s.usable);

  const auto t = l1_series(FundamentalDiscriminant(5), Twist::chi_minus3, 1000000);
  CHECK(t.error_bound < 1e-4);
  const double ref = l1_identity_odd(FundamentalDiscriminant(-15)).value;
  CHECK(std::abs(t.value - ref) <= t.error_bound);

  CHECK_THROWS(l1_series(FundamentalDiscriminant(-3), Twist::chi_minus3, 1000));
  CHECK_THROWS(l1_series(FundamentalDiscriminant(-20), Twist::none, 10));
  const auto rough = l1_series(FundamentalDiscriminant(-9995), Twist::none, 9995, 1e-9);
  CHECK_FALSE(rough.usable);
}

TEST_CASE("identity and closed form agree with the series for |d| <= 2000") {
  for (const auto& d : enumerate_fundamental(2000, SignFilter::both)) {
    const auto exact = l1_exact(d);
    const auto series = l1_series(d, Twist::none, 20 * d.modulus());
    CHECK(exact.value > 0);
    CHECK(std::abs(exact.value - series.value) <= series.error_bound + 1e-12);
  }
}

TEST_CASE("twisted values through the primitive product character") {
  for (const auto& d : enumerate_fundamental(1500, SignFilter::both)) {
    if (d.value() == -3) continue;
    const auto exact = l1_twisted_exact(d);
    const auto series = l1_series(d, Twist::chi_minus3, 60 * d.modulus());
    CHECK(std::abs(exact.value - series.value) <= series.error_bound + 1e-12);
  }
  CHECK(twisted_discriminant(FundamentalDiscriminant(5)) == -15);
  CHECK(twisted_discriminant(FundamentalDiscriminant(-3)) == 1);
  CHECK(twisted_discriminant(FundamentalDiscriminant(12)) == -4);
  // 3 | d: L(1, χ_12 χ_{-3}) = (1 - χ_{-4}(3)/3) L(1, χ_{-4}) = (4/3)(π/4).
  CHECK(l1_twisted_exact(FundamentalDiscriminant(12)).value == doctest::Approx(constants::pi / 3).epsilon(1e-13));
}

TEST_CASE("Euler products") {
  CHECK(euler_product_smooth(-3, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(euler_product_smooth(-3, 1.5) == 1.0);
  CHECK(mertens_product(2) == doctest::Approx(2.0).epsilon(1e-15));
  // Some d with χ_d(q) = 1 for every q <= 7.
  std::int64_t d = 0;
  for (std::int64_t c = 5; c < 100000; c += 4) {
    if (!is_fundamental(c)) continue;
    bool ok = true;
    for (int q : {2, 3, 5, 7}) ok = ok && kronecker(c, q) == 1;
    if (ok) {
      d = c;
      break;
    }
  }
  REQUIRE(d != 0);
  CHECK(euler_product_smooth(d, 7) == doctest::Approx(mertens_product(7)).epsilon(1e-14));
  // Frozen: direct product over the 25 primes below 100.
  CHECK(mertens_product(100) == doctest::Approx(8.3114).epsilon(1e-4));
  double prev = 1.0;
  for (double y : {1e2, 1e3, 1e4, 1e5}) {
    const double gap = std::abs(mertens_product(y) / (constants::exp_gamma * std::log(y)) - 1);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(std::abs(mertens_product(1e4) / (constants::exp_gamma * std::log(1e4)) - 1) < 2e-3);
}
