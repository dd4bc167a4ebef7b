#pragma once

// Character tables of χ_d over one period, prefix-sum extremes M(χ_d) and the
// normalized m(χ_d), and batch scans over discriminant families.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcs/arith.hpp"

namespace qcs {

/// One full period of χ_d: values[n] = χ_d(n) for 0 <= n < |d|.
struct CharacterTable {
  FundamentalDiscriminant d;
  std::vector<std::int8_t> values;

  std::uint64_t modulus() const { return d.modulus(); }
  int operator()(std::uint64_t n) const { return values[n % values.size()]; }
};

struct PrefixSumStats {
  std::int64_t d = 0;
  std::int64_t M = 0;          ///< max_{1<=t<=|d|} |Σ_{n<=t} χ_d(n)|
  std::uint64_t argmax_t = 0;  ///< least t attaining M
  std::int64_t min_prefix = 0;
  std::int64_t max_prefix = 0;
  double m = 0.0;              ///< e^{-γ} π M / √|d|

  std::uint64_t modulus() const { return static_cast<std::uint64_t>(d < 0 ? -d : d); }
  friend bool operator==(const PrefixSumStats&, const PrefixSumStats&) = default;
};

/// Legendre symbol table (n/p) for 0 <= n < p, p an odd prime.
std::vector<std::int8_t> legendre_table(std::uint64_t p);

/// The prime-discriminant factors of d (each −4, ±8 or p* = ±p ≡ 1 mod 4),
/// whose characters multiply to χ_d.
std::vector<std::int64_t> prime_discriminant_factors(const FundamentalDiscriminant& d);

/// Reusable scratch buffers for repeated table fills on one thread.
struct CharacterWorkspace {
  std::vector<std::int8_t> values;
  std::vector<std::int8_t> factor;
};

/// Writes χ_d(n) for 0 <= n < length into ws.values by multiplying the
/// periodic tables of the prime-discriminant factors of d.
void fill_character_values(const FundamentalDiscriminant& d, std::uint64_t length, CharacterWorkspace& ws);

/// Full-period table, spot-checked at 64 pseudo-random positions against
/// kronecker(). Throws std::logic_error if a spot check fails.
CharacterTable character_table(const FundamentalDiscriminant& d);
CharacterTable character_table(std::int64_t d);

/// e^{-γ} π M / √q.
double normalized_max(std::int64_t M, std::uint64_t q);

/// Exact running extremes over t = 1..|d| in one pass.
PrefixSumStats prefix_extrema(const CharacterTable& table);

/// Same record as prefix_extrema(character_table(d)) using only the first
/// half-period, via S(|d|-1-n) = -χ_d(-1) S(n).
PrefixSumStats scan_discriminant(const FundamentalDiscriminant& d, CharacterWorkspace& ws);

enum class Family { all_fundamental, prime_only };

Family parse_family(const std::string& s);
std::string to_string(Family f);

/// Discriminants of a family, sorted by |d| (negative first on ties).
std::vector<FundamentalDiscriminant> family_members(std::uint64_t x, SignFilter sign, Family family);

/// Streams one record per discriminant, in family order, regardless of the
/// worker count. A failure in a worker is rethrown naming the offending d.
void batch_scan_stream(std::uint64_t x, SignFilter sign, Family family, unsigned workers,
                       const std::function<void(const PrefixSumStats&)>& sink);

std::vector<PrefixSumStats> batch_scan(std::uint64_t x, SignFilter sign, Family family, unsigned workers);

/// Per-discriminant map over a family, ordered and parallel. Used by the
/// scans that need something other than prefix extremes.
template <class Result>
std::vector<Result> map_family(const std::vector<FundamentalDiscriminant>& members, unsigned workers,
                               const std::function<Result(const FundamentalDiscriminant&, CharacterWorkspace&)>& fn);

}  // namespace qcs

#include "qcs/detail/map_family.hpp"
