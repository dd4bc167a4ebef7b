#pragma once

// Positivity of Legendre prefix sums: exact λ(p), the U(α) kernel with a
// rigorous truncation bound, CRT sign prescriptions ψ_p(q) = ε_q and searches
// for primes with extreme λ.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcs {

struct PositivityRecord {
  std::uint64_t p = 0;
  unsigned residue_class = 0;  ///< p mod 8
  std::uint64_t positive = 0;  ///< #{0 <= n < p : S_p(n) > 0}; λ = positive / p
  std::uint64_t negative = 0;
  std::uint64_t zeros = 0;
  double lambda = 0.0;
  bool min_lambda_flag = false;  ///< λ <= 1/50

  friend bool operator==(const PositivityRecord&, const PositivityRecord&) = default;
};

/// Thrown when some p ≡ 3 mod 4 has λ(p) <= 1/50.
class LambdaViolation : public std::runtime_error {
 public:
  LambdaViolation(std::uint64_t p, double lambda);
  std::uint64_t p;
};

/// Exact counts by one pass over S_p(0..p-1). Rejects p = 2 and non-primes.
PositivityRecord lambda_measure(std::uint64_t p);

/// Scratch for the half-period kernel.
struct LambdaWorkspace {
  std::vector<std::uint64_t> bits;
};

/// Same record for p ≡ 3 mod 4 from the first half period only, using
/// S_p(p-1-n) = S_p(n) and the quadratic residues below p/2 as a bitset.
PositivityRecord lambda_half_period(std::uint64_t p, LambdaWorkspace& ws);

struct PositivitySurvey {
  std::uint64_t x = 0;
  std::vector<PositivityRecord> records;  ///< every odd prime <= x, ascending
  double min_lambda = 1.0;                ///< over p ≡ 3 mod 4
  std::uint64_t argmin_p = 0;
  std::vector<std::uint64_t> histogram;   ///< 100 buckets of width 0.01, p ≡ 3 mod 4
};

/// Throws LambdaViolation if some p ≡ 3 mod 4 has λ(p) <= 1/50, and
/// std::logic_error if #pos != #neg for some p ≡ 1 mod 4.
PositivitySurvey positivity_survey(std::uint64_t x, unsigned workers = 1);

/// λ(p) records for all primes p ≡ 3 mod 4 with p <= x, ascending.
std::vector<PositivityRecord> lambda_population(std::uint64_t x, unsigned workers = 1);

/// h(n): completely multiplicative, h(q) = χ_{-3}(q) for primes q != 3, h(3) = -1.
int twist_weight(std::uint64_t n);

struct UKernelValue {
  double alpha = 0.0;
  std::uint64_t N = 0;
  double value = 0.0;             ///< Σ_{n<=N} h(n) cos(2πnα)/n
  double truncation_bound = 0.0;  ///< |U(α) - value| <= truncation_bound
};

/// Requires N >= 1000.
UKernelValue u_kernel(double alpha, std::uint64_t N);

/// π/(8√3).
double u_kernel_threshold();

struct SignPrescription {
  double y = 0.0;
  unsigned a = 3;                       ///< p ≡ a mod 4
  std::map<std::uint64_t, int> eps;     ///< ε_q for primes q <= y (q = 2 included)
  std::uint64_t Q = 0;                  ///< 8 Π_{3<=q<=y} q
  std::uint64_t b = 0;                  ///< least residues combined by CRT
  unsigned residue_mod8 = 0;
  std::map<std::uint64_t, std::vector<std::uint64_t>> allowed;  ///< q -> residues c mod q with ψ_p(q) = ε_q

  /// p ≡ a mod 4 and ψ_p(q) = ε_q for all q <= y, checked with kronecker().
  bool satisfied_by(std::uint64_t p) const;
};

/// eps must give ±1 for every prime q <= y. Throws std::overflow_error when
/// Q would not fit in 63 bits.
SignPrescription prescribe_signs(double y, unsigned a, const std::map<std::uint64_t, int>& eps);

/// ε_q = value for every prime q <= y.
std::map<std::uint64_t, int> constant_signs(double y, int value);

struct ClassSearch {
  std::vector<std::uint64_t> primes;  ///< every p <= x with the prescribed signs
  std::uint64_t pi_x = 0;
  double density = 0.0;               ///< primes.size() / π(x)
  double expected_density = 0.0;      ///< 2^{-π(y)-1}
  double ratio = 0.0;                 ///< density / expected_density
};

/// All primes p <= x (other than those dividing Q) satisfying the
/// prescription, each verified directly.
ClassSearch find_primes_in_class(std::uint64_t x, const SignPrescription& prescription);

enum class ExtremalMode { large, small };

struct ExtremalParams {
  ExtremalMode mode = ExtremalMode::large;
  double y = 13;    ///< large: ε_q = +1 for q <= y
  double H = 5;     ///< small: ψ_p(q) = h(q) for q <= H
  double y0 = 13;   ///< small: ψ_p(q) = -1 for H < q <= y0
};

struct ExtremalResult {
  ExtremalParams params;
  SignPrescription prescription;
  std::vector<PositivityRecord> ranked;  ///< descending λ (large) or ascending (small)
  std::uint64_t population_size = 0;
  double population_mean = 0.0;
  double class_mean = 0.0;
  double gap = 0.0;  ///< class_mean - population_mean
  std::optional<double> T;  ///< large mode: 1/(1 - max λ)
  std::string diagnostic;   ///< set when no class prime <= x
};

/// p ≡ 3 mod 4 throughout. The population baseline is every p ≡ 3 mod 4 up to x.
ExtremalResult extremal_search(std::uint64_t x, const ExtremalParams& params, unsigned workers = 1);
ExtremalResult extremal_search(std::uint64_t x, const ExtremalParams& params,
                               const std::vector<PositivityRecord>& population);

SignPrescription extremal_prescription(const ExtremalParams& params);

}  // namespace qcs
