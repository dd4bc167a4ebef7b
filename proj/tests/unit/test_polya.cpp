#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "qcs/constants.hpp"
#include "qcs/polya.hpp"

using namespace qcs;

namespace {

/// Direct truncated Fourier series with exponentials, O(Z) per t.
double oracle_polya(std::int64_t d, std::uint64_t t, std::uint64_t Z) {
  const double q = static_cast<double>(d < 0 ? -d : d);
  std::complex<double> s = 0;
  for (std::int64_t n = -static_cast<std::int64_t>(Z); n <= static_cast<std::int64_t>(Z); ++n) {
    if (n == 0) continue;
    const int chi = oracle::kronecker(d, static_cast<std::uint64_t>(n < 0 ? -n : n)) * (n < 0 && d < 0 ? -1 : 1);
    if (chi == 0) continue;
    const double ang = -2 * constants::pi * static_cast<double>(n) * static_cast<double>(t) / q;
    s += static_cast<double>(chi) * (1.0 - std::polar(1.0, ang)) / static_cast<double>(n);
  }
  // G(χ_d) = √|d| for d > 0 and i√|d| for d < 0.
  const std::complex<double> G = d < 0 ? std::complex<double>(0, std::sqrt(q)) : std::complex<double>(std::sqrt(q), 0);
  return (G / std::complex<double>(0, 2 * constants::pi) * s).real();
}

long prefix(std::int64_t d, std::uint64_t t) {
  long s = 0;
  for (std::uint64_t n = 1; n <= t; ++n) s += oracle::kronecker(d, n);
  return s;
}

std::complex<double> oracle_kernel(std::int64_t d, double alpha, std::uint64_t Z, const std::function<bool(std::uint64_t)>& keep,
                                   const std::function<double(std::uint64_t)>& h, bool exp_kernel) {
  std::complex<double> s = 0;
  for (std::uint64_t n = 1; n <= Z; ++n) {
    if (!keep(n)) continue;
    const double c = oracle::kronecker(d, n) * h(n) / static_cast<double>(n);
    const double x = 2 * constants::pi * static_cast<double>(n) * alpha;
    s += exp_kernel ? c * std::polar(1.0, x) : std::complex<double>(c * (1 - std::cos(x)), 0);
  }
  return s;
}

std::uint64_t largest_factor(std::uint64_t n) {
  std::uint64_t best = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) best = p, n /= p;
  return n > 1 ? n : best;
}

}  // namespace

TEST_CASE("alpha grid") {
  const AlphaGrid g(8);
  CHECK(g.size() == 8);
  CHECK(g.point(1) == 0.125);
  CHECK(g.point(8) == 1.0);
  CHECK(g.spacing() == 0.125);
  CHECK_THROWS(AlphaGrid(0));
}

TEST_CASE("polya truncation against the direct series") {
  for (std::int64_t d : {-163, -84, 5, 12, -7, 41}) {
    const auto t = character_table(d);
    const auto q = t.modulus();
    for (std::uint64_t s : {std::uint64_t{1}, q / 3, q / 2, q - 1}) {
      CHECK(polya_truncation(t, s, 4 * q).value == doctest::Approx(oracle_polya(d, s, 4 * q)).epsilon(1e-9).scale(1));
    }
  }
}

TEST_CASE("polya truncation examples") {
  const auto t = character_table(-163);
  const auto v = polya_truncation(t, 40, 163 * 163);
  CHECK_FALSE(v.z_below_modulus);
  CHECK(std::abs(v.value - prefix(-163, 40)) <= 3);
  CHECK(std::abs(polya_truncation(t, 163, 163 * 163).value) < 1e-9);
  CHECK(polya_truncation(t, 40, 100).z_below_modulus);

  const auto all = polya_truncation_all(t, 163 * 163);
  REQUIRE(all.size() == 164);
  CHECK(all[0] == 0.0);
  for (std::uint64_t s = 1; s <= 163; ++s) CHECK(all[s] == doctest::Approx(polya_truncation(t, s, 163 * 163).value).epsilon(1e-9).scale(1));
}

TEST_CASE("polya error bound and shrink over |d| <= 300") {
  for (const auto& d : enumerate_fundamental(300, SignFilter::both)) {
    const auto t = character_table(d);
    const auto q = d.modulus();
    const auto p1 = polya_error_profile(t, q * q);
    CHECK(p1.max_error <= 10 * p1.bound);
    CHECK(p1.max_midpoint_error <= p1.max_error + 0.5 + 1e-9);
  }
  double r_sum = 0;
  int count = 0;
  for (const auto& d : enumerate_fundamental(300, SignFilter::both)) {
    const auto q = d.modulus();
    if (q < 50) continue;
    const auto t = character_table(d);
    r_sum += polya_error_profile(t, 2 * q * q).mean_midpoint_error / polya_error_profile(t, q * q).mean_midpoint_error;
    ++count;
  }
  const double shrink = r_sum / count;
  CHECK(shrink >= 0.3);
  CHECK(shrink <= 0.7);
}

TEST_CASE("kernel sum examples") {
  const auto t3 = character_table(-3);
  const auto unit = MultiplicativeWeight::unit(100);
  const auto v = kernel_sum(t3, 0.5, 3, Filter::all(), unit, Kernel::exp);
  CHECK(v.real() == doctest::Approx(-1.5).epsilon(1e-14));
  CHECK(std::abs(v.imag()) < 1e-14);
  const auto t = character_table(-1019);
  const auto w = MultiplicativeWeight::unit(5000);
  CHECK(std::abs(kernel_sum(t, 0.0, 5000, Filter::all(), w, Kernel::one_minus_cos)) == 0.0);
  double smooth_mass = 0;
  for (std::uint64_t n = 1; n <= 5000; ++n)
    if (largest_factor(n) <= 30) smooth_mass += 1.0 / static_cast<double>(n);
  CHECK(smooth_mass <= constants::exp_gamma * std::log(30.0) + 1.0);
  for (double a : {0.1, 0.25, 0.3337, 0.71}) {
    CHECK(std::abs(kernel_sum(t, a, 5000, Filter::smooth(30), w, Kernel::one_minus_cos)) <= 2 * smooth_mass);
  }
}

TEST_CASE("kernel sum against the oracle and the smooth + rough split") {
  const auto h = MultiplicativeWeight::twist(3000);
  auto twist = [](std::uint64_t n) {
    double v = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p)
      while (n % p == 0) v *= (p == 3 ? -1 : oracle::kronecker(-3, p)), n /= p;
    if (n > 1) v *= (n == 3 ? -1 : oracle::kronecker(-3, n));
    return v;
  };
  for (std::int64_t d : {-23, 29, -1019, 2021}) {
    if (!is_fundamental(d)) continue;
    const auto t = character_table(d);
    for (double a : {0.0, 0.123, 0.5, 0.777}) {
      for (bool e : {true, false}) {
        const auto kernel = e ? Kernel::exp : Kernel::one_minus_cos;
        const auto all = kernel_sum(t, a, 3000, Filter::all(), h, kernel);
        const auto sm = kernel_sum(t, a, 3000, Filter::smooth(17), h, kernel);
        const auto ro = kernel_sum(t, a, 3000, Filter::rough(17), h, kernel);
        CHECK(std::abs(all - (sm + ro)) < 1e-12);
        const auto ref = oracle_kernel(d, a, 3000, [](std::uint64_t n) { return largest_factor(n) > 17; }, twist, e);
        CHECK(std::abs(ro - ref) < 1e-11);
      }
    }
  }
}

TEST_CASE("grid maxima") {
  const auto w = MultiplicativeWeight::unit(4000);
  // rough(y) with y >= Z is empty.
  const TailSeries empty(1000, Filter::rough(1000), w);
  CHECK(empty.n.empty());
  CHECK(grid_max(character_table(-1019), empty, Kernel::exp, 4096).value == 0.0);

  const TailSeries series(1000, Filter::rough(10), w);
  const auto t = character_table(-1019);
  const auto g = grid_max(t, series, Kernel::exp, 4096);
  double direct = 0;
  for (std::uint64_t b = 1; b <= 4096; ++b) direct = std::max(direct, std::abs(kernel_sum(t, b / 4096.0, series, Kernel::exp)));
  CHECK(g.value == doctest::Approx(direct).epsilon(1e-10));
  CHECK(g.value <= series.mass);
  CHECK_FALSE(g.discretization_dominated);
  CHECK(grid_max(t, series, Kernel::exp, 512).discretization_dominated);

  // One-minus-cos is symmetric under α -> 1 - α: same maximum at R and on the reflected grid.
  const auto c = grid_max(t, series, Kernel::one_minus_cos, 4096);
  CHECK(std::abs(kernel_sum(t, c.argmax_alpha, series, Kernel::one_minus_cos).real()) ==
        doctest::Approx(std::abs(kernel_sum(t, 1 - c.argmax_alpha, series, Kernel::one_minus_cos).real())).epsilon(1e-9));

  std::mt19937_64 rng(77);
  const auto all = enumerate_fundamental(10000, SignFilter::both);
  for (int i = 0; i < 20; ++i) {
    const auto tab = character_table(all[rng() % all.size()]);
    const auto a = grid_max(tab, series, Kernel::exp, 4096).value;
    const auto b = grid_max(tab, series, Kernel::exp, 8192).value;
    CHECK(b >= a - 1e-12);
    CHECK(b - a <= 2 * constants::pi * 1000.0 / 4096.0);
  }
  CHECK(default_grid_size(100) == 4096);
  CHECK(default_grid_size(10000) == 40000);
}

TEST_CASE("tail exceedance survey") {
  TailSurveyConfig c;
  c.x = 3000;
  c.y = 10;
  c.Z = 2000;
  c.A_grid = {-1.0, 0.3, 0.6, 1.0, 50.0};
  const auto s = tail_exceedance_survey(c);
  CHECK(s.family_size == enumerate_fundamental(3000, SignFilter::both).size());
  REQUIRE(s.rows.size() == 5);
  CHECK(s.rows[0].fraction == 1.0);
  CHECK(s.rows[4].fraction == 0.0);
  CHECK_FALSE(s.rows[4].log_fraction.has_value());
  for (std::size_t i = 1; i < s.rows.size(); ++i) CHECK(s.rows[i].fraction <= s.rows[i - 1].fraction);
  CHECK(s.rows[1].threshold == doctest::Approx(constants::exp_gamma * 0.3));

  c.workers = 3;
  CHECK(tail_exceedance_survey(c).statistics == s.statistics);

  auto c2 = c;
  c2.y = 40;
  const auto s2 = tail_exceedance_survey(c2);
  for (std::size_t i = 0; i < s.rows.size(); ++i) CHECK(s2.rows[i].fraction <= s.rows[i].fraction);

  auto bad = c;
  bad.x = 4;
  bad.sign = SignFilter::positive;
  CHECK_THROWS(tail_exceedance_survey(bad));
}

TEST_CASE("smooth tail check") {
  const auto two = smooth_tail_bound_check(2, 1000);
  CHECK(two.value <= 2.0 / 1000);
  CHECK(two.value == doctest::Approx(2.0 / 1024).epsilon(1e-9));
  const auto s = smooth_tail_bound_check(20, 1000000);
  CHECK(s.value < std::exp(-std::sqrt(std::log(20.0))));
  CHECK(s.reference == doctest::Approx(0.177).epsilon(0.01));
  CHECK(smooth_tail_bound_check(20, 2000000).value < s.value);
}
