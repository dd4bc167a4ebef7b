#include "qcs/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace qcs {

PrimeTable::PrimeTable(std::uint32_t limit) : limit_(limit), spf_(static_cast<std::size_t>(limit) + 1, 0) {
  if (limit < 2) throw std::invalid_argument("sieve_primes: limit must be >= 2");
  spf_[0] = 0;
  spf_[1] = 1;
  // Linear sieve: every composite is struck exactly once by its least prime.
  primes_.reserve(limit < 100 ? 32 : static_cast<std::size_t>(1.2 * limit / std::log(double(limit))));
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t si = spf_[i];
    for (const std::uint32_t p : primes_) {
      const std::uint64_t m = i * p;
      if (p > si || m > limit) break;
      spf_[m] = p;
    }
  }
}

std::uint32_t PrimeTable::smallest_prime_factor(std::uint32_t n) const {
  if (n < 2) throw std::invalid_argument("smallest_prime_factor: n must be >= 2");
  return smallest_factor(n);
}

std::uint32_t PrimeTable::largest_prime_factor(std::uint32_t n) const {
  if (n < 2) throw std::invalid_argument("largest_prime_factor: n must be >= 2");
  check(n);
  std::uint32_t p = 1;
  while (n > 1) {
    p = spf_[n];
    n /= p;
  }
  return p;
}

bool PrimeTable::is_smooth(std::uint32_t n, double y) const {
  if (n <= 1) return true;
  return static_cast<double>(largest_prime_factor(n)) <= y;
}

bool PrimeTable::is_rough(std::uint32_t n, double y) const {
  if (n <= 1) return true;
  return static_cast<double>(smallest_prime_factor(n)) > y;
}

std::size_t PrimeTable::prime_count(std::uint32_t x) const {
  check(x);
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

std::vector<std::pair<std::uint32_t, int>> PrimeTable::factorize(std::uint32_t n) const {
  check(n);
  std::vector<std::pair<std::uint32_t, int>> out;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

std::vector<std::uint32_t> PrimeTable::largest_factor_table(std::uint32_t bound) const {
  check(bound);
  std::vector<std::uint32_t> gpf(static_cast<std::size_t>(bound) + 1, 1);
  for (std::uint32_t n = 2; n <= bound; ++n) {
    const std::uint32_t p = spf_[n];
    gpf[n] = std::max(p, gpf[n / p]);
  }
  return gpf;
}

PrimeTable sieve_primes(std::uint64_t limit) {
  if (limit < 2) throw std::invalid_argument("sieve_primes: limit must be >= 2");
  if (limit > std::numeric_limits<std::uint32_t>::max() - 1) {
    throw std::invalid_argument("sieve_primes: limit beyond single-table range; use primes_in_range");
  }
  return PrimeTable(static_cast<std::uint32_t>(limit));
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  lo = std::max<std::uint64_t>(lo, 2);
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi))) + 1;
  std::vector<std::uint64_t> base;
  {
    std::vector<char> small(root + 1, 1);
    for (std::uint64_t i = 2; i <= root; ++i) {
      if (!small[i]) continue;
      base.push_back(i);
      for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }
  }
  constexpr std::uint64_t segment = 1u << 18;
  std::vector<char> mark(segment);
  for (std::uint64_t start = lo; start <= hi; start += segment) {
    const std::uint64_t end = std::min(hi, start + segment - 1);
    std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(end - start + 1), 1);
    for (const std::uint64_t p : base) {
      if (p * p > end) break;
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      for (std::uint64_t j = first; j <= end; j += p) mark[j - start] = 0;
    }
    for (std::uint64_t n = start; n <= end; ++n) {
      if (mark[n - start]) out.push_back(n);
    }
    if (end == hi) break;
  }
  return out;
}

int jacobi(std::uint64_t a, std::uint64_t m) {
  if (m == 0 || (m & 1) == 0) throw std::invalid_argument("jacobi: modulus must be odd and positive");
  a %= m;
  int t = 1;
  while (a != 0) {
    const int z = std::countr_zero(a);
    a >>= z;
    if (z & 1) {
      const std::uint64_t r = m & 7;
      if (r == 3 || r == 5) t = -t;
    }
    if ((a & 3) == 3 && (m & 3) == 3) t = -t;
    std::swap(a, m);
    a %= m;
  }
  return m == 1 ? t : 0;
}

int kronecker(std::int64_t d, std::uint64_t n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  const auto du = static_cast<std::uint64_t>(d);  // two's complement keeps d mod 2^k
  if ((n & 1) == 0 && (du & 1) == 0) return 0;
  int k = 1;
  const int v = std::countr_zero(n);
  n >>= v;
  if (v & 1) {
    static constexpr int two[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    k = two[du & 7];
  }
  if (n == 1) return k;
  // Jacobi symbol is periodic in the numerator modulo the odd part.
  const std::int64_t ns = static_cast<std::int64_t>(n);
  std::int64_t r = d % ns;
  if (r < 0) r += ns;
  return k * jacobi(static_cast<std::uint64_t>(r), n);
}

bool is_squarefree(std::uint64_t n) {
  if (n == 0) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

bool is_fundamental(std::int64_t d) {
  if (d == 0) throw std::domain_error("is_fundamental: d = 0");
  if (d == 1) return false;
  const std::int64_t r4 = ((d % 4) + 4) % 4;
  const auto abs_u = [](std::int64_t v) { return static_cast<std::uint64_t>(v < 0 ? -v : v); };
  if (r4 == 1) return is_squarefree(abs_u(d));
  if (r4 != 0) return false;
  const std::int64_t m = d / 4;
  const std::int64_t m4 = ((m % 4) + 4) % 4;
  if (m4 != 2 && m4 != 3) return false;
  return is_squarefree(abs_u(m));
}

SignFilter parse_sign(const std::string& s) {
  if (s == "-" || s == "minus" || s == "negative" || s == "neg") return SignFilter::negative;
  if (s == "+" || s == "plus" || s == "positive" || s == "pos") return SignFilter::positive;
  if (s == "both" || s == "all" || s == "+-" || s == "±") return SignFilter::both;
  throw std::invalid_argument("unknown sign '" + s + "' (expected -, + or both)");
}

std::string to_string(SignFilter s) {
  switch (s) {
    case SignFilter::negative: return "-";
    case SignFilter::positive: return "+";
    case SignFilter::both: return "both";
  }
  return "?";
}

FundamentalDiscriminant::FundamentalDiscriminant(std::int64_t d) : d_(d) {
  if (d == 0 || !is_fundamental(d)) {
    throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(d));
  }
}

std::vector<FundamentalDiscriminant> enumerate_fundamental(std::uint64_t x, SignFilter sign) {
  std::vector<FundamentalDiscriminant> out;
  if (x < 3) return out;
  if (x > (std::uint64_t{1} << 40)) throw std::invalid_argument("enumerate_fundamental: x too large");
  // Squarefree flags on [0, x] (only |m| <= x/4 and |d| <= x are queried).
  std::vector<char> sqfree(x + 1, 1);
  sqfree[0] = 0;
  for (std::uint64_t p = 2; p * p <= x; ++p) {
    for (std::uint64_t j = p * p; j <= x; j += p * p) sqfree[j] = 0;
  }
  const bool want_neg = sign != SignFilter::positive;
  const bool want_pos = sign != SignFilter::negative;
  out.reserve(static_cast<std::size_t>(0.62 * static_cast<double>(x)) + 16);
  auto ok = [&](std::int64_t d) {
    const std::int64_t r4 = ((d % 4) + 4) % 4;
    const std::uint64_t a = static_cast<std::uint64_t>(d < 0 ? -d : d);
    if (r4 == 1) return sqfree[a] != 0;
    if (r4 != 0) return false;
    const std::int64_t m = d / 4;
    const std::int64_t m4 = ((m % 4) + 4) % 4;
    return (m4 == 2 || m4 == 3) && sqfree[a / 4] != 0;
  };
  for (std::uint64_t n = 3; n <= x; ++n) {
    const auto d = static_cast<std::int64_t>(n);
    if (want_neg && ok(-d)) out.push_back(FundamentalDiscriminant(-d, FundamentalDiscriminant::Unchecked{}));
    if (want_pos && ok(d)) out.push_back(FundamentalDiscriminant(d, FundamentalDiscriminant::Unchecked{}));
  }
  return out;
}

std::vector<FundamentalDiscriminant> prime_discriminants(std::uint64_t x, SignFilter sign) {
  std::vector<FundamentalDiscriminant> out;
  if (x < 3) return out;
  for (const std::uint64_t p : primes_in_range(3, x)) {
    const bool neg = (p & 3) == 3;
    if (neg && sign == SignFilter::positive) continue;
    if (!neg && sign == SignFilter::negative) continue;
    const auto d = static_cast<std::int64_t>(p);
    out.push_back(FundamentalDiscriminant(neg ? -d : d, FundamentalDiscriminant::Unchecked{}));
  }
  return out;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  if (n < 2) return out;
  auto strip = [&](std::uint64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p * p <= n; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact: r * (n-k+i) is divisible by i at every step
    if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("binomial overflow");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t divisor_fn_from_exponents(unsigned k, std::span<const int> exponents) {
  if (k == 0) throw std::invalid_argument("divisor_fn: k must be >= 1");
  unsigned __int128 r = 1;
  for (const int a : exponents) {
    r *= binomial(static_cast<std::uint64_t>(a) + k - 1, k - 1);
    if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("divisor_fn overflow");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t divisor_fn(unsigned k, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisor_fn: n must be >= 1");
  std::vector<int> exps;
  for (const auto& [p, e] : factorize(n)) exps.push_back(e);
  return divisor_fn_from_exponents(k, exps);
}

}  // namespace qcs
