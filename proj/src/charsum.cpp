#include "qcs/charsum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qcs/constants.hpp"

namespace qcs {

namespace {

void fill_legendre(std::uint64_t p, std::vector<std::int8_t>& t) {
  t.assign(p, -1);
  t[0] = 0;
  // n^2 mod p for n = 1..(p-1)/2 hits every quadratic residue exactly once.
  std::uint64_t s = 0;
  for (std::uint64_t n = 1; n <= (p - 1) / 2; ++n) {
    s += 2 * n - 1;
    if (s >= p) s -= p;
    t[s] = 1;
  }
}

}  // namespace

std::vector<std::int8_t> legendre_table(std::uint64_t p) {
  if (p < 3 || (p & 1) == 0) throw std::invalid_argument("legendre_table: p must be an odd prime");
  std::vector<std::int8_t> t;
  fill_legendre(p, t);
  return t;
}

std::vector<std::int64_t> prime_discriminant_factors(const FundamentalDiscriminant& d) {
  std::vector<std::int64_t> out;
  std::int64_t odd_product = 1;
  for (const auto& [p, e] : factorize(d.modulus())) {
    if (p == 2) continue;
    const auto ps = static_cast<std::int64_t>(p);
    const std::int64_t pstar = (p & 3) == 1 ? ps : -ps;
    out.push_back(pstar);
    odd_product *= pstar;
  }
  const std::int64_t two_part = d.value() / odd_product;
  if (two_part != 1) out.insert(out.begin(), two_part);
  return out;
}

namespace {

void factor_table(std::int64_t f, std::vector<std::int8_t>& out) {
  switch (f) {
    case -4: out.assign({0, 1, 0, -1}); return;
    case 8: out.assign({0, 1, 0, -1, 0, -1, 0, 1}); return;
    case -8: out.assign({0, 1, 0, 1, 0, -1, 0, -1}); return;
    default: fill_legendre(static_cast<std::uint64_t>(f < 0 ? -f : f), out); return;
  }
}

void spot_check(const FundamentalDiscriminant& d, const std::vector<std::int8_t>& values, std::uint64_t length) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(d.value()) * 0x9E3779B97F4A7C15ull);
  std::uniform_int_distribution<std::uint64_t> pick(0, length - 1);
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t n = pick(rng);
    if (values[n] != kronecker(d.value(), n)) {
      throw std::logic_error("character table mismatch at n=" + std::to_string(n) + " for d=" +
                             std::to_string(d.value()));
    }
  }
}

}  // namespace

void fill_character_values(const FundamentalDiscriminant& d, std::uint64_t length, CharacterWorkspace& ws) {
  const auto factors = prime_discriminant_factors(d);
  ws.values.resize(length);
  bool first = true;
  for (const std::int64_t f : factors) {
    factor_table(f, ws.factor);
    const std::size_t period = ws.factor.size();
    const std::int8_t* src = ws.factor.data();
    std::int8_t* dst = ws.values.data();
    for (std::uint64_t start = 0; start < length; start += period) {
      const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(period, length - start));
      if (first) {
        std::copy_n(src, len, dst + start);
      } else {
        for (std::size_t j = 0; j < len; ++j) dst[start + j] = static_cast<std::int8_t>(dst[start + j] * src[j]);
      }
    }
    first = false;
  }
}

CharacterTable character_table(const FundamentalDiscriminant& d) {
  CharacterWorkspace ws;
  fill_character_values(d, d.modulus(), ws);
  spot_check(d, ws.values, d.modulus());
  return CharacterTable{d, std::move(ws.values)};
}

CharacterTable character_table(std::int64_t d) { return character_table(FundamentalDiscriminant(d)); }

double normalized_max(std::int64_t M, std::uint64_t q) {
  return constants::exp_neg_gamma * constants::pi * static_cast<double>(M) / std::sqrt(static_cast<double>(q));
}

PrefixSumStats prefix_extrema(const CharacterTable& table) {
  PrefixSumStats s;
  s.d = table.d.value();
  const std::uint64_t q = table.modulus();
  std::int64_t S = 0;
  for (std::uint64_t t = 1; t <= q; ++t) {
    S += table.values[t % q];
    if (S > s.max_prefix) s.max_prefix = S;
    if (S < s.min_prefix) s.min_prefix = S;
    const std::int64_t a = S < 0 ? -S : S;
    if (a > s.M) {
      s.M = a;
      s.argmax_t = t;
    }
  }
  s.m = normalized_max(s.M, q);
  return s;
}

PrefixSumStats scan_discriminant(const FundamentalDiscriminant& d, CharacterWorkspace& ws) {
  const std::uint64_t q = d.modulus();
  const std::uint64_t half = (q - 1) / 2;
  fill_character_values(d, half + 1, ws);
  spot_check(d, ws.values, half + 1);
  const std::int8_t* v = ws.values.data();
  std::int64_t S = 0, hi = 0, lo = 0, best = 0;
  std::uint64_t arg = 0;
  for (std::uint64_t t = 1; t <= half; ++t) {
    S += v[t];
    if (S > hi) {
      hi = S;
      if (hi > best) best = hi, arg = t;
    } else if (S < lo) {
      lo = S;
      if (-lo > best) best = -lo, arg = t;
    }
  }
  PrefixSumStats s;
  s.d = d.value();
  if (d.even()) {
    // S(q-1-n) = -S(n): the full period reaches both ±max(hi, -lo).
    s.max_prefix = std::max(hi, -lo);
    s.min_prefix = -s.max_prefix;
  } else {
    s.max_prefix = hi;
    s.min_prefix = lo;
  }
  s.M = best;
  s.argmax_t = arg;
  s.m = normalized_max(best, q);
  return s;
}

Family parse_family(const std::string& s) {
  if (s == "all" || s == "all-fundamental" || s == "fundamental") return Family::all_fundamental;
  if (s == "prime" || s == "prime-only" || s == "primes") return Family::prime_only;
  throw std::invalid_argument("unknown family '" + s + "' (expected all or prime)");
}

std::string to_string(Family f) { return f == Family::all_fundamental ? "all" : "prime"; }

std::vector<FundamentalDiscriminant> family_members(std::uint64_t x, SignFilter sign, Family family) {
  if (x < 3) throw std::invalid_argument("family_members: x must be >= 3");
  return family == Family::all_fundamental ? enumerate_fundamental(x, sign) : prime_discriminants(x, sign);
}

void batch_scan_stream(std::uint64_t x, SignFilter sign, Family family, unsigned workers,
                       const std::function<void(const PrefixSumStats&)>& sink) {
  const auto members = family_members(x, sign, family);
  constexpr std::size_t block = 1 << 14;
  std::function<PrefixSumStats(const FundamentalDiscriminant&, CharacterWorkspace&)> fn = scan_discriminant;
  for (std::size_t start = 0; start < members.size(); start += block) {
    const std::size_t end = std::min(members.size(), start + block);
    const std::vector<FundamentalDiscriminant> slice(members.begin() + static_cast<std::ptrdiff_t>(start),
                                                     members.begin() + static_cast<std::ptrdiff_t>(end));
    for (const auto& rec : map_family(slice, workers, fn)) sink(rec);
  }
}

std::vector<PrefixSumStats> batch_scan(std::uint64_t x, SignFilter sign, Family family, unsigned workers) {
  std::vector<PrefixSumStats> out;
  batch_scan_stream(x, sign, family, workers, [&](const PrefixSumStats& s) { out.push_back(s); });
  return out;
}

}  // namespace qcs
