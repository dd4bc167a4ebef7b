#include "qcs/lfunc.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qcs/constants.hpp"
#include "qcs/numeric.hpp"

namespace qcs {

namespace {
constexpr double eps = std::numeric_limits<double>::epsilon();
}

std::string to_string(Twist t) { return t == Twist::none ? "none" : "chi_-3"; }

std::string to_string(LMethod m) {
  switch (m) {
    case LMethod::identity: return "identity";
    case LMethod::closed_form: return "closed-form";
    case LMethod::series: return "series";
  }
  return "?";
}

LValue l1_identity_odd(const FundamentalDiscriminant& d, CharacterWorkspace& ws) {
  if (!d.negative()) throw std::invalid_argument("l1_identity_odd: requires d < 0");
  const std::uint64_t q = d.modulus();
  const std::uint64_t half = q / 2;
  fill_character_values(d, std::max<std::uint64_t>(half + 1, 3), ws);
  std::int64_t S = 0;
  for (std::uint64_t n = 1; n <= half; ++n) S += ws.values[n];
  const int chi2 = kronecker(d.value(), 2);
  LValue r;
  r.d = d.value();
  r.method = LMethod::identity;
  r.value = constants::pi * static_cast<double>(S) / ((2.0 - chi2) * std::sqrt(static_cast<double>(q)));
  r.error_bound = 8 * eps * std::abs(r.value);
  return r;
}

LValue l1_identity_odd(const FundamentalDiscriminant& d) {
  CharacterWorkspace ws;
  return l1_identity_odd(d, ws);
}

LValue l1_closed_even(const FundamentalDiscriminant& d, CharacterWorkspace& ws) {
  if (!d.even()) throw std::invalid_argument("l1_closed_even: requires d > 0");
  const std::uint64_t q = d.modulus();
  const std::uint64_t half = (q - 1) / 2;
  fill_character_values(d, half + 1, ws);
  CompensatedSum sum;
  double magnitude = 0.0;
  const double w = constants::pi / static_cast<double>(q);
  for (std::uint64_t a = 1; a <= half; ++a) {
    const int c = ws.values[a];
    if (c == 0) continue;
    const double term = std::log(std::sin(w * static_cast<double>(a)));
    sum.add(c > 0 ? term : -term);
    magnitude += std::abs(term);
  }
  // χ(a) = χ(q-a) and sin(πa/q) = sin(π(q-a)/q); the middle a = q/2 has χ = 0.
  const double scale = 2.0 / std::sqrt(static_cast<double>(q));
  LValue r;
  r.d = d.value();
  r.method = LMethod::closed_form;
  r.value = -scale * sum.value();
  r.error_bound = 8 * eps * (scale * magnitude + std::abs(r.value));
  return r;
}

LValue l1_closed_even(const FundamentalDiscriminant& d) {
  CharacterWorkspace ws;
  return l1_closed_even(d, ws);
}

LValue l1_exact(const FundamentalDiscriminant& d, CharacterWorkspace& ws) {
  return d.negative() ? l1_identity_odd(d, ws) : l1_closed_even(d, ws);
}

LValue l1_exact(const FundamentalDiscriminant& d) {
  CharacterWorkspace ws;
  return l1_exact(d, ws);
}

LValue l1_series(const FundamentalDiscriminant& d, Twist twist, std::uint64_t N, double tolerance) {
  const std::uint64_t q = d.modulus();
  if (N < q) throw std::invalid_argument("l1_series: cutoff N must be >= |d|");
  if (twist == Twist::chi_minus3 && d.value() == -3) {
    throw std::invalid_argument("l1_series: χ_{-3}·χ_{-3} is principal; L(s) has a pole at s = 1");
  }
  const CharacterTable table = character_table(d);
  static constexpr int chi3[3] = {0, 1, -1};
  const bool tw = twist == Twist::chi_minus3;
  auto chi = [&](std::uint64_t n) {
    const int v = table.values[n % q];
    return tw ? v * chi3[n % 3] : v;
  };
  const std::uint64_t period = tw ? std::lcm(q, std::uint64_t{3}) : q;
  std::int64_t S = 0, window = 0;
  for (std::uint64_t n = 1; n <= period; ++n) {
    S += chi(n);
    window = std::max(window, S < 0 ? -S : S);
  }
  CompensatedSum sum;
  S = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const int c = chi(n);
    if (c == 0) continue;
    S += c;
    sum.add(c / static_cast<double>(n));
  }
  LValue r;
  r.d = d.value();
  r.twist = twist;
  r.method = LMethod::series;
  r.cutoff = N;
  r.value = sum.value();
  const double tail = (static_cast<double>(S < 0 ? -S : S) + static_cast<double>(window)) / (static_cast<double>(N) + 1.0);
  r.error_bound = tail + 16 * eps * (std::log(static_cast<double>(N)) + 1.0);
  r.usable = r.error_bound <= tolerance;
  return r;
}

std::int64_t twisted_discriminant(const FundamentalDiscriminant& d) {
  if (d.modulus() % 3 != 0) return -3 * d.value();
  return d.value() / -3;
}

LValue l1_twisted_exact(const FundamentalDiscriminant& d, CharacterWorkspace& ws) {
  const std::int64_t dp = twisted_discriminant(d);
  if (dp == 1) throw std::invalid_argument("l1_twisted_exact: χ_{-3}·χ_{-3} is principal");
  const FundamentalDiscriminant prim(dp);
  LValue r = l1_exact(prim, ws);
  if (d.modulus() % 3 == 0) {
    const double factor = 1.0 - kronecker(dp, 3) / 3.0;
    r.value *= factor;
    r.error_bound *= factor;
  }
  r.d = d.value();
  r.twist = Twist::chi_minus3;
  return r;
}

LValue l1_twisted_exact(const FundamentalDiscriminant& d) {
  CharacterWorkspace ws;
  return l1_twisted_exact(d, ws);
}

double euler_product_smooth(std::int64_t d, double y) {
  if (y < 2) return 1.0;
  double prod = 1.0;
  for (const std::uint64_t p : primes_in_range(2, static_cast<std::uint64_t>(std::floor(y)))) {
    prod /= 1.0 - kronecker(d, p) / static_cast<double>(p);
  }
  return prod;
}

double mertens_product(double y) {
  if (y < 2) return 1.0;
  double prod = 1.0;
  for (const std::uint64_t p : primes_in_range(2, static_cast<std::uint64_t>(std::floor(y)))) {
    prod /= 1.0 - 1.0 / static_cast<double>(p);
  }
  return prod;
}

}  // namespace qcs
