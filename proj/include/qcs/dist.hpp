#pragma once

// Exceedance tables for m(χ_d), L(1, χ), L(1, χχ_{-3}) and λ(p) over
// discriminant families, the constants B_0 and η, and the displayed
// large-deviation envelopes as overlay curves.

#include <cstdint>
#include <string>
#include <vector>

#include "qcs/arith.hpp"
#include "qcs/charsum.hpp"

namespace qcs {

struct B0Parts {
  double value = 0.0;
  double first = 0.0;   ///< ∫₀¹ tanh(y)/y dy
  double second = 0.0;  ///< ∫₁^∞ (tanh(y) - 1)/y dy
  double error_estimate = 0.0;
};

/// B_0 by adaptive quadrature; the tail integral is mapped to [0, 1/e] by t = e^{-y}.
B0Parts compute_B0(double tolerance = 1e-13);

struct Constants {
  double B0 = 0.0;
  double B0_first = 0.0;
  double B0_second = 0.0;
  double eta = 0.0;  ///< e^{-γ} log 2
  double e_gamma = 0.0;
  double pi = 0.0;
};

Constants compute_constants();

enum class Statistic { m, L1, L1_twisted, lambda };

Statistic parse_statistic(const std::string& s);
std::string to_string(Statistic s);

struct FamilySpec {
  Family family = Family::all_fundamental;
  SignFilter sign = SignFilter::both;

  /// fundamental:negative, prime:3mod4, ...
  std::string label() const;
};

struct DistributionTable {
  std::string family;
  Statistic statistic = Statistic::m;
  std::uint64_t x = 0;
  std::vector<double> tau_grid;
  std::vector<std::uint64_t> counts;
  std::vector<double> proportions;
  std::uint64_t family_size = 0;
  double scale = 1.0;  ///< counts[i] = #{statistic > scale · τ_i}
};

/// Step 0.1 on [1, log log x + 1].
std::vector<double> default_tau_grid(std::uint64_t x);

/// The raw statistic for every family member, in family order. d = -3 is
/// skipped for the twisted L-value (the product character is principal), and
/// lambda requires the prime family.
std::vector<double> family_statistics(std::uint64_t x, const FamilySpec& family, Statistic statistic,
                                      unsigned workers);

/// Threshold factor: 1 for m and lambda, e^γ for L1, (2/3)e^γ for the twisted L-value.
double statistic_scale(Statistic statistic);

DistributionTable tabulate(std::uint64_t x, const FamilySpec& family, Statistic statistic,
                           const std::vector<double>& tau_grid, unsigned workers = 1);

/// Counts from precomputed statistics; asserts the monotonicity and range invariants.
DistributionTable tabulate_values(std::vector<double> values, std::uint64_t x, const FamilySpec& family,
                                  Statistic statistic, const std::vector<double>& tau_grid);

struct Envelope {
  std::string theorem;
  double tau = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Leading exponentials of the displayed bounds with O(·) factors and
/// unspecified constants set to 1. Qualitative overlays only. Theorems
/// "1.1" ... "1.5"; requires τ >= 2.
Envelope theory_envelope(const std::string& theorem, double tau);

struct SignDominance {
  std::uint64_t x = 0;
  std::vector<PrefixSumStats> top;  ///< by m descending, ties by |d| then sign
  std::uint64_t negative = 0;
  double negative_share = 0.0;
};

SignDominance sign_dominance(std::uint64_t x, std::size_t top = 50, unsigned workers = 1);

}  // namespace qcs
