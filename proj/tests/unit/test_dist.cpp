#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcs/constants.hpp"
#include "qcs/dist.hpp"
#include "qcs/numeric.hpp"

using namespace qcs;

namespace {

/// L(1, χ_{-p}) for p ≡ 3 mod 4 from h(-p) = -(1/p) Σ_{n<p} n (n/p), residues marked by squaring.
double oracle_l1_minus_p(std::uint64_t p) {
  if (p == 3) return constants::pi / (3 * std::sqrt(3.0));
  std::vector<char> qr(p, 0);
  for (std::uint64_t n = 1; n <= p / 2; ++n) qr[n * n % p] = 1;
  std::int64_t s = 0;
  for (std::uint64_t n = 1; n < p; ++n) s += qr[n] ? static_cast<std::int64_t>(n) : -static_cast<std::int64_t>(n);
  const double h = -static_cast<double>(s) / static_cast<double>(p);
  return constants::pi * h / std::sqrt(static_cast<double>(p));
}

}  // namespace

TEST_CASE("B0") {
  const auto b = compute_B0();
  CHECK(b.value > 0.818);
  CHECK(b.value < 0.819);
  CHECK(std::abs(b.value - 0.8187) < 5e-4);
  CHECK(b.first > 0.90);
  CHECK(b.first < 0.95);
  CHECK(b.value == doctest::Approx(b.first + b.second).epsilon(1e-15));
  CHECK(std::abs(compute_B0(5e-14).value - b.value) < 1e-8);

  // Independent: plain composite Simpson on [0, 1] and on [1, 40] after which tanh = 1 to double precision.
  auto simpson = [](auto f, double a, double c, int n) {
    const double h = (c - a) / n;
    double s = f(a) + f(c);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
  };
  const double first = simpson([](double y) { return y == 0 ? 1.0 : std::tanh(y) / y; }, 0, 1, 2000);
  const double second = simpson([](double y) { return (std::tanh(y) - 1) / y; }, 1, 40, 200000);
  CHECK(b.first == doctest::Approx(first).epsilon(1e-11));
  CHECK(b.value == doctest::Approx(first + second).epsilon(1e-9));

  const auto c = compute_constants();
  CHECK(c.eta == doctest::Approx(0.389174058).epsilon(1e-9));
  CHECK(c.B0 == b.value);
}

TEST_CASE("default tau grid") {
  const auto g = default_tau_grid(1000000);
  CHECK(g.front() == 1.0);
  CHECK(g.back() <= std::log(std::log(1e6)) + 1 + 1e-12);
  CHECK(g.size() == 27);
  CHECK(g[3] == doctest::Approx(1.3));
}

TEST_CASE("tabulate invariants and examples") {
  const FamilySpec neg{Family::all_fundamental, SignFilter::negative};
  const auto t = tabulate(10000, neg, Statistic::m, {0.0, 1.0, 1.5, 2.0});
  CHECK(t.proportions[0] == 1.0);
  CHECK(t.proportions[1] > t.proportions[2]);
  CHECK(t.family_size == enumerate_fundamental(10000, SignFilter::negative).size());
  CHECK(t.family == neg.label());
  for (std::size_t i = 1; i < t.counts.size(); ++i) CHECK(t.counts[i] <= t.counts[i - 1]);
  CHECK(tabulate(10000, neg, Statistic::m, {0.0, 1.0, 1.5, 2.0}, 3).counts == t.counts);

  CHECK(statistic_scale(Statistic::L1) == constants::exp_gamma);
  CHECK(statistic_scale(Statistic::L1_twisted) == doctest::Approx(2 * constants::exp_gamma / 3));
  CHECK(parse_statistic("L1-twisted") == Statistic::L1_twisted);
  CHECK_THROWS(parse_statistic("M"));
  CHECK_THROWS(tabulate(1000, neg, Statistic::lambda, {1.0}));
  CHECK_THROWS(tabulate(1000, neg, Statistic::m, {1.5, 1.0}));
}

TEST_CASE("F_{x,3}(1) at x = 10^5 against a class number recount") {
  const FamilySpec fam{Family::prime_only, SignFilter::negative};
  const auto t = tabulate(100000, fam, Statistic::L1, {1.0}, 2);
  std::uint64_t n = 0, count = 0;
  for (std::uint64_t p = 3; p <= 100000; p += 4) {
    if (!oracle::is_prime(p)) continue;
    ++n;
    if (oracle_l1_minus_p(p) > constants::exp_gamma) ++count;
  }
  CHECK(t.family_size == n);
  CHECK(t.counts[0] == count);
  CHECK(count > 0);
}

TEST_CASE("lambda statistic on primes") {
  const FamilySpec fam{Family::prime_only, SignFilter::negative};
  const auto v = family_statistics(2000, fam, Statistic::lambda, 1);
  CHECK(v.front() == doctest::Approx(1.0 / 3));
  CHECK(v[1] == doctest::Approx(5.0 / 7));
  const auto t = tabulate_values(v, 2000, fam, Statistic::lambda, {0.0, 0.5, 0.99});
  CHECK(t.proportions[0] == 1.0);
  CHECK(t.proportions[2] < t.proportions[1]);
}

TEST_CASE("twisted statistic skips d = -3") {
  const FamilySpec fam{Family::all_fundamental, SignFilter::negative};
  const auto v = family_statistics(100, fam, Statistic::L1_twisted, 1);
  CHECK(v.size() == enumerate_fundamental(100, SignFilter::negative).size() - 1);
}

TEST_CASE("envelopes") {
  const double eta = constants::exp_neg_gamma * constants::log2;
  const double B0 = compute_B0().value;
  CHECK(theory_envelope("1.1", 3).lower == doctest::Approx(std::exp(-std::exp(3 - eta - B0) / 3)).epsilon(1e-14));
  for (const char* th : {"1.1", "1.3", "1.5"})
    for (double tau = 2; tau <= 10; tau += 0.25) {
      const auto e = theory_envelope(th, tau);
      CHECK(e.lower <= e.upper);
    }
  for (const char* th : {"1.1", "1.2", "1.3", "1.4", "1.5"}) {
    const auto e = theory_envelope(th, 12);
    CHECK(e.lower < 1e-6);
    CHECK(e.upper < 1e-6);
  }
  CHECK_THROWS(theory_envelope("1.1", 1.5));
  CHECK_THROWS(theory_envelope("2.1", 3));
}

TEST_CASE("sign dominance") {
  const auto s = sign_dominance(20000, 20, 2);
  REQUIRE(s.top.size() == 20);
  for (std::size_t i = 1; i < s.top.size(); ++i) CHECK(s.top[i].m <= s.top[i - 1].m);
  CHECK(s.negative_share == doctest::Approx(s.negative / 20.0));
  CHECK(s.negative > 10);
  // Matches a full sort of the batch scan.
  auto all = batch_scan(20000, SignFilter::both, Family::all_fundamental, 1);
  std::sort(all.begin(), all.end(), [](const PrefixSumStats& a, const PrefixSumStats& b) { return a.m > b.m; });
  CHECK(all.front().d == s.top.front().d);
  CHECK(all[19].m == s.top[19].m);
}
