#include "qcs/rmf.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <stdexcept>

#include "qcs/arith.hpp"
#include "qcs/constants.hpp"
#include "qcs/dist.hpp"
#include "qcs/numeric.hpp"
#include "qcs/parallel.hpp"

namespace qcs {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double power(double base, unsigned e) {
  double r = 1.0;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

int hashed_sign(std::uint64_t seed, std::uint64_t p) {
  return (splitmix64(splitmix64(seed) ^ (p * 0xD1B54A32D192ED03ull)) >> 63) ? 1 : -1;
}

SignAssignment::SignAssignment(std::uint64_t seed, std::uint64_t prime_limit) : seed_(seed) {
  if (prime_limit >= 2) {
    for (const std::uint64_t p : primes_in_range(2, prime_limit)) signs_.emplace(p, hashed_sign(seed, p));
  }
}

SignAssignment::SignAssignment(std::map<std::uint64_t, int> overrides, std::uint64_t fallback_seed)
    : seed_(fallback_seed), signs_(std::move(overrides)) {
  for (const auto& [p, s] : signs_) {
    if (s != 1 && s != -1) throw std::invalid_argument("SignAssignment: signs must be ±1");
  }
}

int SignAssignment::at_prime(std::uint64_t p) const {
  if (auto it = signs_.find(p); it != signs_.end()) return it->second;
  return hashed_sign(seed_, p);
}

int SignAssignment::operator()(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("SignAssignment: X(0) is undefined");
  int s = 1;
  for (const auto& [p, a] : factorize(n)) {
    if (a & 1) s *= at_prime(p);
  }
  return s;
}

SignAssignment sample_signs(std::uint64_t prime_limit, std::uint64_t seed) {
  if (prime_limit < 2) throw std::invalid_argument("sample_signs: prime_limit must be >= 2");
  return SignAssignment(seed, prime_limit);
}

double rough_sum(const SignAssignment& signs, double y, std::uint64_t N) {
  if (N < 2 || y >= static_cast<double>(N)) return 0.0;
  const RoughIndex index(y, N);
  std::vector<double> out;
  std::vector<std::int8_t> scratch;
  index.sums([&](std::uint32_t slot) { return signs.at_prime(index.primes()[slot]); }, {N}, out, scratch);
  return out[0];
}

RoughIndex::RoughIndex(double y, std::uint64_t N) : y_(y), N_(N) {
  if (N > 0xffffffffull) throw std::invalid_argument("RoughIndex: N exceeds 32 bits");
  if (N < 2) return;
  const PrimeTable table(static_cast<std::uint32_t>(N));
  for (const std::uint32_t p : table.primes()) {
    if (p > y) primes_.push_back(p);
  }
  std::vector<std::int32_t> pos(N + 1, -1);
  for (std::uint32_t n = 2; n <= N; ++n) {
    const std::uint32_t p = table.smallest_factor(n);
    if (p <= y) continue;
    const std::uint32_t m = n / p;
    pos[n] = static_cast<std::int32_t>(n_.size());
    n_.push_back(n);
    prime_slot_.push_back(static_cast<std::uint32_t>(std::lower_bound(primes_.begin(), primes_.end(), p) - primes_.begin()));
    cofactor_.push_back(m == 1 ? -1 : pos[m]);
  }
}

void RoughIndex::sums(const std::function<int(std::uint32_t)>& sign_of, const std::vector<std::uint64_t>& bounds,
                      std::vector<double>& out, std::vector<std::int8_t>& scratch) const {
  out.assign(bounds.size(), 0.0);
  scratch.resize(n_.size());
  std::vector<std::int8_t> prime_sign(primes_.size(), 0);
  double s = 0.0;
  std::size_t b = 0;
  for (std::size_t i = 0; i < n_.size(); ++i) {
    while (b < bounds.size() && n_[i] > bounds[b]) out[b++] = s;
    if (b == bounds.size()) return;
    std::int8_t& ps = prime_sign[prime_slot_[i]];
    if (ps == 0) ps = static_cast<std::int8_t>(sign_of(prime_slot_[i]));
    const std::int8_t x = cofactor_[i] < 0 ? ps : static_cast<std::int8_t>(ps * scratch[cofactor_[i]]);
    scratch[i] = x;
    s += x / static_cast<double>(n_[i]);
  }
  while (b < bounds.size()) out[b++] = s;
}

MomentEstimate moment_mc(double y, unsigned k, std::uint64_t N, std::uint64_t trials, std::uint64_t seed,
                         unsigned workers) {
  if (k < 1) throw std::invalid_argument("moment_mc: k must be >= 1");
  if (trials < 100) throw std::invalid_argument("moment_mc: trials must be >= 100");
  if (N == 0) N = static_cast<std::uint64_t>(std::llround(y * 1000.0));
  if (static_cast<double>(N) <= y) throw std::invalid_argument("moment_mc: N must exceed y");
  const RoughIndex index(y, 2 * N);
  const std::uint64_t bias_trials = std::max<std::uint64_t>(1, (trials + 19) / 20);
  std::vector<double> values(trials), bias(bias_trials);
  workers = std::max(1u, workers);
  std::vector<std::vector<double>> outs(workers);
  std::vector<std::vector<std::int8_t>> scratch(workers);
  parallel_chunks(trials, workers, 64, [&](std::size_t begin, std::size_t end, unsigned id) {
    for (std::size_t t = begin; t < end; ++t) {
      const std::uint64_t trial_seed = splitmix64(seed ^ splitmix64(t));
      const bool with_bias = t < bias_trials;
      std::vector<std::uint64_t> bounds{N};
      if (with_bias) bounds.push_back(2 * N);
      index.sums([&](std::uint32_t slot) { return hashed_sign(trial_seed, index.primes()[slot]); }, bounds, outs[id],
                 scratch[id]);
      values[t] = power(outs[id][0] * outs[id][0], k);
      if (with_bias) bias[t] = power(outs[id][1] * outs[id][1], k) - values[t];
    }
  });
  MomentEstimate m;
  m.y = y;
  m.k = k;
  m.N = N;
  m.trials = trials;
  m.bias_trials = bias_trials;
  CompensatedSum mean;
  for (const double v : values) mean.add(v);
  m.estimate = mean.value() / static_cast<double>(trials);
  CompensatedSum var;
  for (const double v : values) var.add((v - m.estimate) * (v - m.estimate));
  // For the sample mean the leave-one-out jackknife reduces to s/√n.
  m.standard_error = std::sqrt(var.value() / (static_cast<double>(trials) * static_cast<double>(trials - 1)));
  CompensatedSum b;
  for (const double v : bias) b.add(v);
  m.bias_estimate = b.value() / static_cast<double>(bias_trials);
  return m;
}

double moment_diagonal_k1(double y, std::uint64_t N) {
  if (N < 2 || y >= static_cast<double>(N)) return 0.0;
  if (N > 0xffffffffull) throw std::invalid_argument("moment_diagonal_k1: N exceeds 32 bits");
  const PrimeTable table(static_cast<std::uint32_t>(N));
  std::vector<double> c(N + 1, 0.0);
  for (std::uint32_t n = 2; n <= N; ++n) {
    if (table.smallest_factor(n) <= y) continue;
    std::uint64_t kernel = 1;
    for (const auto& [p, a] : table.factorize(n)) {
      if (a & 1) kernel *= p;
    }
    c[kernel] += 1.0 / n;
  }
  CompensatedSum s;
  for (const double v : c) s.add(v * v);
  return s.value();
}

ProductValue moment_exact_product(double y, unsigned k, std::uint64_t cutoff) {
  if (static_cast<double>(cutoff) <= y) throw std::invalid_argument("moment_exact_product: cutoff must exceed y");
  ProductValue r;
  r.cutoff = cutoff;
  if (k == 0) {
    r.value = 1.0;
    return r;
  }
  const auto lo = static_cast<std::uint64_t>(std::floor(std::max(y, 1.0))) + 1;
  CompensatedSum log_sum;
  for (const std::uint64_t p : primes_in_range(lo, cutoff)) {
    const double u = 1.0 / static_cast<double>(p);
    log_sum.add(std::log(0.5 * (std::pow(1.0 - u, -static_cast<double>(k)) + std::pow(1.0 + u, -static_cast<double>(k)))));
  }
  r.value = std::exp(log_sum.value());
  // Each omitted factor has log <= (k + k²/2)/p² and Σ_{p>C} 1/p² < 1/C.
  const double kk = static_cast<double>(k);
  r.tail_bound = r.value * std::expm1((kk + 0.5 * kk * kk) / static_cast<double>(cutoff));
  return r;
}

double moment_exact(double y, unsigned k, std::uint64_t cutoff) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  if (static_cast<double>(cutoff) <= y) throw std::invalid_argument("moment_exact: cutoff must exceed y");
  const unsigned J = 2 * k;
  std::vector<Big> P(J + 1, Big(1));
  const auto lo = static_cast<std::uint64_t>(std::floor(std::max(y, 1.0))) + 1;
  std::vector<Big> a(J + 1), b(J + 1);
  for (const std::uint64_t p : primes_in_range(lo, cutoff)) {
    const Big pp(p);
    const Big ia = pp / (pp - 1), ib = pp / (pp + 1);
    Big x = 1, z = 1;
    for (unsigned j = 1; j <= J; ++j) {
      x *= ia;
      z *= ib;
      P[j] *= (x + z) / 2;
    }
  }
  Big total = 0;
  for (unsigned j = 0; j <= J; ++j) {
    const Big c(binomial(J, j));
    total += (j & 1) ? -c * P[j] : c * P[j];
  }
  return static_cast<double>(total);
}

double divisor_square_sum(unsigned k, double y, std::uint64_t N, std::uint64_t prime_cap) {
  if (N < 1) throw std::invalid_argument("divisor_square_sum: N must be >= 1");
  if (k == 0) return 1.0;
  const std::uint64_t top = prime_cap == 0 ? N : std::min(N, prime_cap);
  const auto lo = static_cast<std::uint64_t>(std::floor(std::max(y, 1.0))) + 1;
  const std::vector<std::uint64_t> primes = top >= lo ? primes_in_range(lo, top) : std::vector<std::uint64_t>{};
  CompensatedSum s;
  s.add(1.0);
  // term(n) = Π_{p^a || n} C(2a+k-1, k-1) / p^{2a}; depth-first with nondecreasing primes.
  auto visit = [&](auto&& self, std::uint64_t n, double term, std::size_t first) -> void {
    for (std::size_t i = first; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      if (n > N / p) break;
      const double inv2 = 1.0 / (static_cast<double>(p) * static_cast<double>(p));
      std::uint64_t m = n;
      double pk = 1.0;
      for (unsigned a = 1; m <= N / p; ++a) {
        m *= p;
        pk *= inv2;
        const double t = term * static_cast<double>(binomial(2 * a + k - 1, k - 1)) * pk;
        s.add(t);
        self(self, m, t, i + 1);
      }
    }
  };
  visit(visit, 1, 1.0, 0);
  return s.value();
}

RandomL1Moment l1_random_moment(unsigned k, std::uint64_t cutoff) {
  RandomL1Moment r;
  r.k = k;
  r.cutoff = cutoff;
  if (k == 0) {
    r.value = 1.0;
    return r;
  }
  if (cutoff < 2) throw std::invalid_argument("l1_random_moment: cutoff must be >= 2");
  const double kk = static_cast<double>(k);
  CompensatedSum log_sum;
  for (const std::uint64_t p : primes_in_range(2, cutoff)) {
    const double u = 1.0 / static_cast<double>(p);
    const double la = -kk * std::log1p(-u), lb = -kk * std::log1p(u);
    // log(½(e^{la} + e^{lb})) with la > lb.
    log_sum.add(la + std::log1p(std::exp(lb - la)) - constants::log2);
  }
  r.log_value = log_sum.value();
  r.value = std::exp(r.log_value);
  if (k >= 2) {
    const double lk = std::log(kk);
    r.reference = kk * std::log(lk) + kk * constants::euler_gamma + kk / lk * (compute_B0().value - 1.0);
  }
  r.cutoff_warning = static_cast<double>(cutoff) < kk * std::log(kk);
  return r;
}

Rational brute_force_expectation(const std::vector<std::uint64_t>& primes,
                                 const std::function<Rational(const SignAssignment&)>& functional) {
  if (primes.size() > 20) throw std::invalid_argument("brute_force_expectation: at most 20 primes");
  for (const std::uint64_t p : primes) {
    const auto f = p >= 2 ? factorize(p) : decltype(factorize(p)){};
    if (f.size() != 1 || f[0].second != 1) {
      throw std::invalid_argument("brute_force_expectation: " + std::to_string(p) + " is not a prime");
    }
  }
  const std::uint64_t count = std::uint64_t{1} << primes.size();
  constexpr std::uint64_t seed_a = 0x5EEDull;
  Rational total = 0;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::map<std::uint64_t, int> signs;
    for (std::size_t i = 0; i < primes.size(); ++i) signs[primes[i]] = (mask >> i & 1) ? -1 : 1;
    const Rational v = functional(SignAssignment(signs, seed_a));
    // Probe: other signs at the unlisted primes must not change the value.
    for (std::uint64_t probe = 1; mask < 4 && probe <= 16; ++probe) {
      if (functional(SignAssignment(signs, seed_a + probe)) != v) {
        throw std::invalid_argument("brute_force_expectation: functional depends on a prime outside the set");
      }
    }
    total += v;
  }
  return total / Rational(count);
}

}  // namespace qcs
