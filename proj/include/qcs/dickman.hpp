#pragma once

// Dickman–de Bruijn ρ on a fine grid, its integral and tail, harmonic sums
// over friable integers, and the threshold u₀ with ∫_{u₀}^∞ ρ prescribed.

#include <cstdint>
#include <vector>

namespace qcs {

/// ρ, ∫₀^u ρ and ∫_u^∞ ρ sampled at u = i·step, 0 <= u <= u_max. Built from
/// the Taylor expansion of ρ at the right end of each unit interval, whose
/// coefficients are all positive, so values keep full relative precision even
/// where ρ is far below machine epsilon. 1/step must be an integer.
class RhoTable {
 public:
  explicit RhoTable(double u_max = 20.0, double step = 1e-4);

  double u_max() const { return u_max_; }
  double step() const { return step_; }
  const std::vector<double>& values() const { return rho_; }
  const std::vector<double>& integral_values() const { return integral_; }
  const std::vector<double>& tail_values() const { return tail_; }

  double rho(double u) const;
  double integral(double u) const;  ///< ∫₀^u ρ
  double tail(double u) const;      ///< ∫_u^∞ ρ

 private:
  std::size_t per_unit_;
  double u_max_;
  double step_;
  std::vector<double> rho_;
  std::vector<double> integral_;
  std::vector<double> tail_;

  std::vector<std::vector<double>> coeffs_;  ///< ρ(k - z) = Σ coeffs_[k][i] z^i on [k-1, k]
  std::vector<double> mass_;                 ///< ∫_{k-1}^k ρ = k ρ(k)
  std::vector<double> beyond_;               ///< Σ_{j>=k} mass_[j]

  std::size_t locate(double u, double& z) const;
  double series_rho(double u) const;
  double series_integral(double u) const;
  double series_tail(double u) const;
  double partial_upper(std::size_t k, double z) const;
};

/// The shared default table (u <= 20, step 1e-4), built on first use.
const RhoTable& default_rho_table();

/// Throw std::domain_error for u < 0 and std::out_of_range past the table.
double rho(double u);
double rho_integral(double u);
/// ∫_u^∞ ρ as a sum of positive terms rather than e^γ - ∫₀^u ρ, so it keeps
/// full relative precision where it is tiny.
double rho_tail(double u);

struct SmoothHarmonic {
  double y = 0.0;
  double u = 0.0;
  double exact = 0.0;       ///< Σ_{n<=y^u, P^+(n)<=y} 1/n
  double prediction = 0.0;  ///< (log y) ∫₀^u ρ
  double gap = 0.0;         ///< exact - prediction
  std::uint64_t terms = 0;
};

/// Requires y >= 2 and y^u <= 10^8.
SmoothHarmonic smooth_harmonic(double y, double u);

/// The u₀ with ∫_{u₀}^∞ ρ = C log log y / log y, by bisection to 1e-10.
/// Requires y >= 16 and a target below e^γ.
double solve_u0(double y, double C);

}  // namespace qcs
