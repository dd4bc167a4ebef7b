#pragma once

// Truncated Pólya Fourier expansion of character prefix sums, friable and
// non-friable parts of Σ χ_d(n) h(n) e(nα)/n, their maxima over a uniform
// α-grid, and exceedance surveys over discriminant families.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcs/arith.hpp"
#include "qcs/charsum.hpp"

namespace qcs {

/// The points b/R, 1 <= b <= R.
struct AlphaGrid {
  std::uint64_t R = 0;

  explicit AlphaGrid(std::uint64_t r);
  std::uint64_t size() const { return R; }
  double point(std::uint64_t b) const { return static_cast<double>(b) / static_cast<double>(R); }
  double spacing() const { return 1.0 / static_cast<double>(R); }
};

/// Completely multiplicative real weight h with |h| <= 1, tabulated on [0, limit].
class MultiplicativeWeight {
 public:
  /// h ≡ 1.
  static MultiplicativeWeight unit(std::uint64_t limit);
  /// h(q) = χ_{-3}(q) for primes q != 3 and h(3) = -1.
  static MultiplicativeWeight twist(std::uint64_t limit);
  /// Extends prime values at_prime(p) completely multiplicatively.
  static MultiplicativeWeight from_primes(std::string label, std::uint32_t limit,
                                          const std::function<double(std::uint32_t)>& at_prime);
  static MultiplicativeWeight by_name(const std::string& name, std::uint64_t limit);

  const std::string& label() const { return label_; }
  std::uint64_t limit() const { return values_.size() - 1; }
  double operator()(std::uint64_t n) const { return values_.at(n); }
  const std::vector<double>& values() const { return values_; }

 private:
  MultiplicativeWeight(std::string label, std::vector<double> values)
      : label_(std::move(label)), values_(std::move(values)) {}
  std::string label_;
  std::vector<double> values_;
};

/// Which n take part: every n, y-friable n (P^+(n) <= y), or the rest (P^+(n) > y).
struct Filter {
  enum class Kind { all, smooth, rough };
  Kind kind = Kind::all;
  double y = 0.0;

  static Filter all() { return {Kind::all, 0.0}; }
  static Filter smooth(double y) { return {Kind::smooth, y}; }
  static Filter rough(double y) { return {Kind::rough, y}; }
  std::string label() const;
};

enum class Kernel { exp, one_minus_cos };

/// The n <= Z passing a filter, paired with h(n)/n. Built once per (Z,
/// filter, weight) and shared across discriminants.
struct TailSeries {
  std::uint64_t Z = 0;
  Filter filter;
  std::string h_label;
  std::vector<std::uint32_t> n;
  std::vector<double> weight;  ///< h(n)/n
  double mass = 0.0;           ///< Σ |h(n)|/n over the kept n

  TailSeries(std::uint64_t Z, Filter filter, const MultiplicativeWeight& h);
};

struct PolyaValue {
  double value = 0.0;
  bool z_below_modulus = false;  ///< Z < |d|: the truncation error dominates
};

/// (G(χ_d)/2πi) Σ_{1<=|n|<=Z} χ_d(n)(1 - e(-nt/|d|))/n, evaluated through the
/// residue-class sums of 1/n in closed form.
PolyaValue polya_truncation(const CharacterTable& table, std::uint64_t t, std::uint64_t Z);

/// The same truncation for every t in [0, |d|] (index t), by one DFT of length |d|.
std::vector<double> polya_truncation_all(const CharacterTable& table, std::uint64_t Z);

/// Worst-case agreement of the truncation with the exact prefix sums.
struct PolyaErrorProfile {
  std::int64_t d = 0;
  std::uint64_t Z = 0;
  double max_error = 0.0;           ///< max_t |T_Z(t) - S(t)|
  double max_midpoint_error = 0.0;  ///< max_t |T_Z(t) - (S(t) - χ(t)/2)|
  double mean_midpoint_error = 0.0;
  double bound = 0.0;               ///< 1 + |d| log|d| / Z
};

PolyaErrorProfile polya_error_profile(const CharacterTable& table, std::uint64_t Z);

/// Σ_{1<=n<=Z, filter} χ_d(n) h(n) K(nα)/n with K(x) = e(x) or 1 - cos 2πx.
/// One-minus-cos results are real (imaginary part 0).
std::complex<double> kernel_sum(const CharacterTable& table, double alpha, const TailSeries& series, Kernel kernel);
std::complex<double> kernel_sum(const CharacterTable& table, double alpha, std::uint64_t Z, Filter filter,
                                const MultiplicativeWeight& h, Kernel kernel);

struct TailStatistic {
  std::int64_t d = 0;
  double y = 0.0;
  std::uint64_t Z = 0;
  std::uint64_t R = 0;
  double value = 0.0;        ///< max over the grid of |kernel_sum|
  double argmax_alpha = 0.0;
  std::string h_label;
  double discretization_bound = 0.0;  ///< sup over [0,1) exceeds value by at most this
  bool discretization_dominated = false;  ///< R < Z
};

/// max(4Z, 2^12).
std::uint64_t default_grid_size(std::uint64_t Z);

/// Grid maximum from a single real-input DFT of the coefficients folded mod R.
/// chi must satisfy chi[n % chi.size()] = χ_d(n) for 1 <= n <= Z.
TailStatistic grid_max(std::int64_t d, std::span<const std::int8_t> chi, const TailSeries& series, Kernel kernel,
                       std::uint64_t R);
TailStatistic grid_max(const CharacterTable& table, const TailSeries& series, Kernel kernel, std::uint64_t R);

struct ExceedanceRow {
  double A = 0.0;
  double threshold = 0.0;  ///< e^γ A
  std::uint64_t count = 0;
  double fraction = 0.0;
  std::optional<double> log_fraction;  ///< absent when the fraction is 0
};

struct TailSurveyConfig {
  std::uint64_t x = 0;
  double y = 2.0;
  std::uint64_t Z = 0;
  std::uint64_t R = 0;  ///< 0 selects default_grid_size(Z)
  std::vector<double> A_grid;
  SignFilter sign = SignFilter::both;
  Family family = Family::all_fundamental;
  std::string weight = "unit";  ///< unit | twist
  unsigned workers = 1;
};

struct TailSurvey {
  TailSurveyConfig config;
  std::uint64_t family_size = 0;
  double mass = 0.0;  ///< Σ_{n<=Z, P^+(n)>y} |h(n)|/n
  double discretization_bound = 0.0;
  std::vector<double> statistics;  ///< per discriminant, family order
  std::vector<ExceedanceRow> rows;
};

/// Fraction of the family whose non-friable statistic exceeds e^γ A, per A.
TailSurvey tail_exceedance_survey(const TailSurveyConfig& config);

/// Exceedance rows for precomputed statistics.
std::vector<ExceedanceRow> exceedance_rows(const std::vector<double>& statistics, const std::vector<double>& A_grid);

struct SmoothTailCheck {
  double y = 0.0;
  std::uint64_t Z = 0;
  double exact = 0.0;         ///< Σ_{Z<n<=10^3 Z, P^+(n)<=y} 1/n
  double extrapolated = 0.0;  ///< geometric continuation past 10^3 Z
  double value = 0.0;
  double reference = 0.0;     ///< e^{-√log y}
  std::uint64_t terms = 0;
};

SmoothTailCheck smooth_tail_bound_check(double y, std::uint64_t Z);

}  // namespace qcs
