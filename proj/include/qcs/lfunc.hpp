#pragma once

// L(1, χ_d) by the odd-character prefix identity, the even-character log-sin
// sum, and a series with an Abel-summation tail bound; Euler and Mertens
// products over primes.

#include <cstdint>
#include <string>

#include "qcs/arith.hpp"
#include "qcs/charsum.hpp"

namespace qcs {

enum class Twist { none, chi_minus3 };
enum class LMethod { identity, closed_form, series };

std::string to_string(Twist t);
std::string to_string(LMethod m);

struct LValue {
  std::int64_t d = 0;
  Twist twist = Twist::none;
  double value = 0.0;
  LMethod method = LMethod::identity;
  double error_bound = 0.0;
  bool usable = true;        ///< series only: error_bound <= requested tolerance
  std::uint64_t cutoff = 0;  ///< series only: N
};

/// L(1, χ_d) = π Σ_{n<=|d|/2} χ_d(n) / ((2 - χ_d(2)) √|d|) for d < 0.
LValue l1_identity_odd(const FundamentalDiscriminant& d);
LValue l1_identity_odd(const FundamentalDiscriminant& d, CharacterWorkspace& ws);

/// L(1, χ_d) = -(1/√d) Σ_{a<d} χ_d(a) log sin(πa/d) for d > 0, summed over
/// the pairs a, d-a.
LValue l1_closed_even(const FundamentalDiscriminant& d);
LValue l1_closed_even(const FundamentalDiscriminant& d, CharacterWorkspace& ws);

/// Dispatches on the parity of χ_d.
LValue l1_exact(const FundamentalDiscriminant& d, CharacterWorkspace& ws);
LValue l1_exact(const FundamentalDiscriminant& d);

/// Σ_{n<=N} χ(n)/n for χ = χ_d or χ_d χ_{-3}. error_bound is
/// (|S(N)| + max_n |S(n)|)/(N+1) from the actual partial sums S of χ (which
/// are periodic), plus a rounding allowance. Requires N >= |d|; d = -3 with
/// the twist is principal and rejected.
LValue l1_series(const FundamentalDiscriminant& d, Twist twist, std::uint64_t N, double tolerance = 1e-6);

/// d' with χ_d χ_{-3} = χ_{d'} on integers prime to 3 (d' = -3d, or d/(-3)
/// when 3 | d). Returns 1 for d = -3.
std::int64_t twisted_discriminant(const FundamentalDiscriminant& d);

/// L(1, χ_d χ_{-3}) from the exact evaluators: L(1, χ_{-3d}) when 3 ∤ d,
/// and (1 - χ_{d'}(3)/3) L(1, χ_{d'}) for the imprimitive product when 3 | d.
LValue l1_twisted_exact(const FundamentalDiscriminant& d, CharacterWorkspace& ws);
LValue l1_twisted_exact(const FundamentalDiscriminant& d);

/// Π_{q<=y} (1 - χ_d(q)/q)^{-1}; the empty product (y < 2) is 1.
double euler_product_smooth(std::int64_t d, double y);

/// Π_{p<=y} (1 - 1/p)^{-1}.
double mertens_product(double y);

}  // namespace qcs
