#include "qcs/positivity.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>

#include "qcs/arith.hpp"
#include "qcs/charsum.hpp"
#include "qcs/constants.hpp"
#include "qcs/numeric.hpp"
#include "qcs/parallel.hpp"

namespace qcs {

namespace {

bool is_prime_small(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PositivityRecord make_record(std::uint64_t p, std::uint64_t pos, std::uint64_t neg, std::uint64_t zeros) {
  PositivityRecord r;
  r.p = p;
  r.residue_class = static_cast<unsigned>(p % 8);
  r.positive = pos;
  r.negative = neg;
  r.zeros = zeros;
  r.lambda = static_cast<double>(pos) / static_cast<double>(p);
  r.min_lambda_flag = 50 * pos <= p;
  return r;
}

struct ByteStep {
  std::uint8_t pos[17];
  std::uint8_t zeros[17];
  std::int8_t delta;
};

// For each byte of residue flags and each starting sum in [-8, 8], how many
// of the next eight prefix sums are positive or zero.
const std::array<ByteStep, 256>& byte_steps() {
  static const std::array<ByteStep, 256> table = [] {
    std::array<ByteStep, 256> t{};
    for (int b = 0; b < 256; ++b) {
      for (int s0 = -8; s0 <= 8; ++s0) {
        int s = s0, pos = 0, zeros = 0;
        for (int k = 0; k < 8; ++k) {
          s += (b >> k & 1) ? 1 : -1;
          pos += s > 0;
          zeros += s == 0;
        }
        t[b].pos[s0 + 8] = static_cast<std::uint8_t>(pos);
        t[b].zeros[s0 + 8] = static_cast<std::uint8_t>(zeros);
      }
      t[b].delta = static_cast<std::int8_t>(2 * std::popcount(static_cast<unsigned>(b)) - 8);
    }
    return t;
  }();
  return table;
}

}  // namespace

LambdaViolation::LambdaViolation(std::uint64_t prime, double lambda)
    : std::runtime_error("lambda(" + std::to_string(prime) + ") = " + std::to_string(lambda) + " <= 1/50"), p(prime) {}

PositivityRecord lambda_measure(std::uint64_t p) {
  if (p == 2) throw std::invalid_argument("lambda_measure: p = 2 is not supported");
  if (!is_prime_small(p)) throw std::invalid_argument("lambda_measure: " + std::to_string(p) + " is not prime");
  const auto table = legendre_table(p);
  std::int64_t S = 0;
  std::uint64_t pos = 0, neg = 0, zeros = 0;
  for (std::uint64_t n = 0; n < p; ++n) {
    S += table[n];
    if (S > 0) {
      ++pos;
    } else if (S < 0) {
      ++neg;
    } else {
      ++zeros;
    }
  }
  return make_record(p, pos, neg, zeros);
}

PositivityRecord lambda_half_period(std::uint64_t p, LambdaWorkspace& ws) {
  if (p % 4 != 3) throw std::invalid_argument("lambda_half_period: requires p ≡ 3 mod 4");
  const std::uint64_t h = (p - 1) / 2;
  ws.bits.assign(h / 64 + 1, 0);
  std::uint64_t* bits = ws.bits.data();
  // n^2 mod p over n <= h lists each residue once; for p ≡ 3 mod 4 exactly one
  // of s, p - s is a residue, so residues above h say nothing new. Slot 0 is a sink.
  std::uint64_t s = 0;
  for (std::uint64_t n = 1; n <= h; ++n) {
    s += 2 * n - 1;
    s = s >= p ? s - p : s;
    const std::uint64_t idx = s <= h ? s : 0;
    bits[idx >> 6] |= std::uint64_t{1} << (idx & 63);
  }
  auto bit = [&](std::uint64_t r) { return (bits[r >> 6] >> (r & 63)) & 1; };
  std::int64_t S = 0;
  std::uint64_t pos = 0, zeros = 0;
  auto scalar = [&](std::uint64_t r) {
    S += bit(r) ? 1 : -1;
    pos += S > 0;
    zeros += S == 0;
  };
  std::uint64_t r = 1;
  for (; r <= std::min<std::uint64_t>(7, h); ++r) scalar(r);
  const auto& steps = byte_steps();
  for (; r + 7 <= h; r += 8) {
    const auto byte = static_cast<unsigned>((bits[r >> 6] >> (r & 63)) & 0xff);
    const ByteStep& st = steps[byte];
    if (S > 8) {
      pos += 8;
    } else if (S >= -8) {
      pos += st.pos[S + 8];
      zeros += st.zeros[S + 8];
    }
    S += st.delta;
  }
  for (; r <= h; ++r) scalar(r);
  // S(p-1-n) = S(n): n in [1, h-1] pairs with [h+1, p-2], n = 0 with p - 1.
  const std::uint64_t total_pos = 2 * pos - (S > 0 ? 1 : 0);
  const std::uint64_t total_zeros = 2 + 2 * zeros - (S == 0 ? 1 : 0);
  return make_record(p, total_pos, p - total_pos - total_zeros, total_zeros);
}

std::vector<PositivityRecord> lambda_population(std::uint64_t x, unsigned workers) {
  std::vector<std::uint64_t> primes;
  if (x >= 3) {
    for (const std::uint64_t p : primes_in_range(3, x)) {
      if (p % 4 == 3) primes.push_back(p);
    }
  }
  std::vector<PositivityRecord> out(primes.size());
  workers = std::max(1u, workers);
  std::vector<LambdaWorkspace> spaces(workers);
  parallel_chunks(primes.size(), workers, std::max<std::size_t>(1, primes.size() / (64 * workers)),
                  [&](std::size_t begin, std::size_t end, unsigned id) {
                    for (std::size_t i = begin; i < end; ++i) out[i] = lambda_half_period(primes[i], spaces[id]);
                  });
  return out;
}

PositivitySurvey positivity_survey(std::uint64_t x, unsigned workers) {
  if (x < 7) throw std::invalid_argument("positivity_survey: x must be >= 7");
  const auto primes = primes_in_range(3, x);
  PositivitySurvey s;
  s.x = x;
  s.records.resize(primes.size());
  workers = std::max(1u, workers);
  std::vector<LambdaWorkspace> spaces(workers);
  parallel_chunks(primes.size(), workers, std::max<std::size_t>(1, primes.size() / (64 * workers)),
                  [&](std::size_t begin, std::size_t end, unsigned id) {
                    for (std::size_t i = begin; i < end; ++i) {
                      const std::uint64_t p = primes[i];
                      s.records[i] = p % 4 == 3 ? lambda_half_period(p, spaces[id]) : lambda_measure(p);
                    }
                  });
  s.histogram.assign(100, 0);
  for (const auto& r : s.records) {
    if (r.p % 4 == 1) {
      if (r.positive != r.negative) {
        throw std::logic_error("p = " + std::to_string(r.p) + ": #pos != #neg for p ≡ 1 mod 4");
      }
      continue;
    }
    if (r.min_lambda_flag) throw LambdaViolation(r.p, r.lambda);
    if (r.lambda < s.min_lambda) s.min_lambda = r.lambda, s.argmin_p = r.p;
    s.histogram[std::min<std::size_t>(99, static_cast<std::size_t>(r.lambda * 100.0))]++;
  }
  return s;
}

int twist_weight(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("twist_weight: n must be >= 1");
  int s = 1;
  while (n % 3 == 0) {
    n /= 3;
    s = -s;
  }
  return n % 3 == 1 ? s : -s;
}

double u_kernel_threshold() { return constants::pi / (8.0 * std::sqrt(3.0)); }

namespace {

using u128 = unsigned __int128;

// β = r / 2^K exactly (K <= 120), so multiples of β reduce mod 1 without error.
struct Dyadic {
  u128 r = 0;
  int K = 0;

  static Dyadic from(double alpha) {
    Dyadic d;
    if (alpha == 0.0) return d;
    int e = 0;
    const double f = std::frexp(alpha, &e);
    auto mant = static_cast<std::uint64_t>(std::ldexp(f, 53));
    int K = 53 - e;
    if (K > 120) {
      // α below 2^-67: round to the nearest multiple of 2^-120.
      mant = static_cast<std::uint64_t>(std::llround(std::ldexp(alpha, 120)));
      K = 120;
    }
    while (K > 0 && (mant & 1) == 0 && mant != 0) mant >>= 1, --K;
    d.r = mant;
    d.K = K;
    return d;
  }
  u128 mask() const { return K >= 128 ? ~u128{0} : (u128{1} << K) - 1; }
  double value() const { return std::ldexp(static_cast<double>(r), -K); }
  /// frac(m β)
  double frac_times(std::uint64_t m) const { return std::ldexp(static_cast<double>((r * m) & mask()), -K); }
  Dyadic times3() const { return {(r * 3) & mask(), K}; }
};

}  // namespace

UKernelValue u_kernel(double alpha, std::uint64_t N) {
  if (N < 1000) throw std::invalid_argument("u_kernel: N must be >= 1000");
  if (!(alpha >= 0.0 && alpha < 1.0)) alpha -= std::floor(alpha);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double two_pi = 2.0 * constants::pi;
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  UKernelValue out;
  out.alpha = alpha;
  out.N = N;
  // U(α) = Σ_v (-1)^v 3^{-v} V(3^v α) with V(β) = Σ_{3∤m} χ_{-3}(m) cos(2πmβ)/m,
  // and χ_{-3}(m) cos(2πmβ) = (sin 2πm(1/3+β) + sin 2πm(1/3-β))/√3.
  Dyadic beta = Dyadic::from(alpha);
  CompensatedSum value, bound;
  double scale = 1.0;
  std::uint64_t M = N;
  for (int v = 0; v <= 200; ++v) {
    const double b = beta.value();
    double B = 0.0;
    for (const double g : {1.0 / 3.0 + b, 1.0 / 3.0 - b}) {
      const double s = std::abs(std::sin(constants::pi * (g - std::floor(g))));
      B += 1.0 / s;
    }
    B *= inv_sqrt3;
    if (M >= 1) {
      const double z_re = std::cos(two_pi * b), z_im = std::sin(two_pi * b);
      double c = 1.0, s = 0.0;
      CompensatedSum part;
      int r3 = 0;
      for (std::uint64_t m = 1; m <= M; ++m) {
        if ((m & 1023) == 0) {
          const double x = two_pi * beta.frac_times(m);
          c = std::cos(x);
          s = std::sin(x);
        } else {
          const double nc = c * z_re - s * z_im;
          s = c * z_im + s * z_re;
          c = nc;
        }
        r3 = r3 == 2 ? 0 : r3 + 1;
        if (r3 == 1) {
          part.add(c / static_cast<double>(m));
        } else if (r3 == 2) {
          part.add(-c / static_cast<double>(m));
        }
      }
      value.add((v & 1 ? -scale : scale) * part.value());
      // Rotation drift over at most 1023 steps, plus summation rounding.
      bound.add(scale * 4200.0 * eps * (std::log(static_cast<double>(M)) + 1.0));
    }
    bound.add(scale * B / (static_cast<double>(M) + 1.0));
    scale /= 3.0;
    M /= 3;
    beta = beta.times3();
  }
  out.value = value.value();
  out.truncation_bound = bound.value();
  return out;
}

bool SignPrescription::satisfied_by(std::uint64_t p) const {
  if (p % 4 != a) return false;
  for (const auto& [q, e] : eps) {
    if (p == q) return false;
    if (kronecker(static_cast<std::int64_t>(q), p) != e) return false;
  }
  return true;
}

std::map<std::uint64_t, int> constant_signs(double y, int value) {
  std::map<std::uint64_t, int> eps;
  if (y >= 2) {
    for (const std::uint64_t q : primes_in_range(2, static_cast<std::uint64_t>(std::floor(y)))) eps[q] = value;
  }
  return eps;
}

SignPrescription prescribe_signs(double y, unsigned a, const std::map<std::uint64_t, int>& eps) {
  if (a != 1 && a != 3) throw std::invalid_argument("prescribe_signs: a must be 1 or 3");
  SignPrescription pr;
  pr.y = y;
  pr.a = a;
  const std::vector<std::uint64_t> qs =
      y >= 2 ? primes_in_range(2, static_cast<std::uint64_t>(std::floor(y))) : std::vector<std::uint64_t>{};
  for (const std::uint64_t q : qs) {
    const auto it = eps.find(q);
    if (it == eps.end() || (it->second != 1 && it->second != -1)) {
      throw std::invalid_argument("prescribe_signs: missing or invalid ε for q = " + std::to_string(q));
    }
    pr.eps[q] = it->second;
  }
  u128 Q = 4;
  u128 b = a;
  if (!qs.empty()) {
    const int e2 = pr.eps.at(2);
    pr.residue_mod8 = a == 3 ? (e2 == 1 ? 7u : 3u) : (e2 == 1 ? 1u : 5u);
    Q = 8;
    b = pr.residue_mod8;
  } else {
    pr.residue_mod8 = 0;
  }
  for (const std::uint64_t q : qs) {
    if (q == 2) continue;
    // ψ_p(q) depends only on p mod 4q; with p ≡ a mod 4 fixed, on p mod q.
    // Decide each class from an actual prime in it.
    std::vector<std::uint64_t> allowed;
    for (std::uint64_t c = 1; c < q; ++c) {
      std::uint64_t t = c;
      while (t % 4 != a || t == q || !is_prime_small(t)) t += q;
      if (kronecker(static_cast<std::int64_t>(q), t) == pr.eps[q]) allowed.push_back(c);
    }
    pr.allowed[q] = allowed;
    const std::uint64_t bq = allowed.front();
    // CRT: find k with b + kQ ≡ bq mod q.
    std::uint64_t k = 0;
    while ((b + static_cast<u128>(k) * Q) % q != bq) ++k;
    b += static_cast<u128>(k) * Q;
    Q *= q;
    if (Q >= (u128{1} << 63)) throw std::overflow_error("prescribe_signs: modulus Q exceeds 63 bits");
  }
  pr.Q = static_cast<std::uint64_t>(Q);
  pr.b = static_cast<std::uint64_t>(b % Q);
  if (y >= 10 && static_cast<double>(pr.Q) > std::exp(1.3 * y)) {
    throw std::logic_error("prescribe_signs: Q exceeds e^{1.3y}");
  }
  return pr;
}

ClassSearch find_primes_in_class(std::uint64_t x, const SignPrescription& pr) {
  ClassSearch out;
  if (x < 2) return out;
  const auto primes = primes_in_range(2, x);
  out.pi_x = primes.size();
  std::vector<std::pair<std::uint64_t, std::vector<bool>>> masks;
  for (const auto& [q, cs] : pr.allowed) {
    std::vector<bool> m(q, false);
    for (const std::uint64_t c : cs) m[c] = true;
    masks.emplace_back(q, std::move(m));
  }
  for (const std::uint64_t p : primes) {
    if (pr.Q % p == 0) continue;
    bool in_class = pr.residue_mod8 != 0 ? p % 8 == pr.residue_mod8 : p % 4 == pr.a;
    for (std::size_t i = 0; in_class && i < masks.size(); ++i) in_class = masks[i].second[p % masks[i].first];
    if (in_class != pr.satisfied_by(p)) {
      throw std::logic_error("find_primes_in_class: residue table disagrees with direct check at p = " +
                             std::to_string(p));
    }
    if (in_class) out.primes.push_back(p);
  }
  out.density = out.pi_x ? static_cast<double>(out.primes.size()) / static_cast<double>(out.pi_x) : 0.0;
  out.expected_density = std::ldexp(1.0, -static_cast<int>(pr.eps.size()) - 1);
  out.ratio = out.density / out.expected_density;
  return out;
}

SignPrescription extremal_prescription(const ExtremalParams& params) {
  if (params.mode == ExtremalMode::large) return prescribe_signs(params.y, 3, constant_signs(params.y, 1));
  if (!(params.H < params.y0)) throw std::invalid_argument("extremal_search: requires H < y0");
  auto eps = constant_signs(params.y0, -1);
  for (auto& [q, e] : eps) {
    if (static_cast<double>(q) <= params.H) e = twist_weight(q);
  }
  return prescribe_signs(params.y0, 3, eps);
}

ExtremalResult extremal_search(std::uint64_t x, const ExtremalParams& params,
                               const std::vector<PositivityRecord>& population) {
  ExtremalResult r;
  r.params = params;
  r.prescription = extremal_prescription(params);
  r.population_size = population.size();
  CompensatedSum pop;
  for (const auto& rec : population) pop.add(rec.lambda);
  if (!population.empty()) r.population_mean = pop.value() / static_cast<double>(population.size());
  const auto found = find_primes_in_class(x, r.prescription);
  for (const std::uint64_t p : found.primes) {
    const auto it = std::lower_bound(population.begin(), population.end(), p,
                                     [](const PositivityRecord& rec, std::uint64_t v) { return rec.p < v; });
    r.ranked.push_back(it != population.end() && it->p == p ? *it : lambda_measure(p));
  }
  if (r.ranked.empty()) {
    r.diagnostic = "no primes <= " + std::to_string(x) + " in the prescribed classes (Q = " +
                   std::to_string(r.prescription.Q) + ")";
    return r;
  }
  CompensatedSum cls;
  for (const auto& rec : r.ranked) cls.add(rec.lambda);
  r.class_mean = cls.value() / static_cast<double>(r.ranked.size());
  r.gap = r.class_mean - r.population_mean;
  const bool large = params.mode == ExtremalMode::large;
  std::stable_sort(r.ranked.begin(), r.ranked.end(), [&](const PositivityRecord& u, const PositivityRecord& v) {
    return large ? u.lambda > v.lambda : u.lambda < v.lambda;
  });
  if (large) r.T = 1.0 / (1.0 - r.ranked.front().lambda);
  return r;
}

ExtremalResult extremal_search(std::uint64_t x, const ExtremalParams& params, unsigned workers) {
  return extremal_search(x, params, lambda_population(x, workers));
}

}  // namespace qcs
