#include "qcs/dickman.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcs/arith.hpp"
#include "qcs/constants.hpp"
#include "qcs/numeric.hpp"

namespace qcs {

namespace {

constexpr int kTerms = 72;

}  // namespace

RhoTable::RhoTable(double u_max, double step) : u_max_(u_max), step_(step) {
  if (!(step > 0) || !(u_max >= 2)) throw std::invalid_argument("RhoTable: need step > 0 and u_max >= 2");
  const double inv = 1.0 / step;
  per_unit_ = static_cast<std::size_t>(std::llround(inv));
  if (per_unit_ < 1 || std::abs(inv - static_cast<double>(per_unit_)) > 1e-6) {
    throw std::invalid_argument("RhoTable: 1/step must be an integer");
  }
  // On [k-1, k], ρ(k - z) = Σ a_i z^i. From (k - z) f_k'(z) = f_{k-1}(z):
  // a_{i+1} = (b_i + i a_i) / (k (i + 1)), and k ρ(k) = ∫_{k-1}^k ρ fixes
  // a_0 = Σ_{i>=1} a_i/(i+1) / (k - 1). Every term is positive.
  const auto last = static_cast<std::size_t>(std::ceil(u_max - 1e-12)) + 14;
  coeffs_.assign(last + 1, std::vector<double>(kTerms, 0.0));
  coeffs_[1][0] = 1.0;
  for (std::size_t k = 2; k <= last; ++k) {
    const auto& b = coeffs_[k - 1];
    auto& a = coeffs_[k];
    const double kd = static_cast<double>(k);
    for (int i = 0; i + 1 < kTerms; ++i) a[i + 1] = (b[i] + i * a[i]) / (kd * (i + 1));
    double s = 0.0;
    for (int i = kTerms - 1; i >= 1; --i) s += a[i] / (i + 1);
    a[0] = s / (kd - 1.0);
  }
  // mass_[k] = ∫_{k-1}^k ρ = k ρ(k).
  mass_.assign(last + 1, 0.0);
  for (std::size_t k = 1; k <= last; ++k) mass_[k] = static_cast<double>(k) * coeffs_[k][0];
  beyond_.assign(last + 2, 0.0);
  for (std::size_t k = last; k >= 1; --k) beyond_[k] = beyond_[k + 1] + mass_[k];

  const std::size_t n = static_cast<std::size_t>(std::llround(u_max * inv));
  rho_.resize(n + 1);
  integral_.resize(n + 1);
  tail_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(per_unit_);
    rho_[i] = series_rho(u);
    integral_[i] = series_integral(u);
    tail_[i] = series_tail(u);
  }
}

// Interval index k with u in (k-1, k], and z = k - u.
std::size_t RhoTable::locate(double u, double& z) const {
  auto k = static_cast<std::size_t>(std::ceil(u));
  if (k < 1) k = 1;
  z = static_cast<double>(k) - u;
  return k;
}

double RhoTable::series_rho(double u) const {
  if (u <= 1) return 1.0;
  double z = 0;
  const auto& a = coeffs_[locate(u, z)];
  double s = 0.0;
  for (int i = kTerms - 1; i >= 0; --i) s = s * z + a[i];
  return s;
}

// ∫_u^k ρ = ∫_0^z f_k.
double RhoTable::partial_upper(std::size_t k, double z) const {
  const auto& a = coeffs_[k];
  double s = 0.0;
  for (int i = kTerms - 1; i >= 0; --i) s = s * z + a[i] / (i + 1);
  return s * z;
}

double RhoTable::series_integral(double u) const {
  if (u <= 1) return u;
  double z = 0;
  const auto k = locate(u, z);
  // Σ_{j<k} j ρ(j) + ∫_{k-1}^u ρ.
  return (beyond_[1] - beyond_[k]) + (mass_[k] - partial_upper(k, z));
}

double RhoTable::series_tail(double u) const {
  if (u <= 1) return (1.0 - u) + beyond_[2];
  double z = 0;
  const auto k = locate(u, z);
  return partial_upper(k, z) + beyond_[k + 1];
}

double RhoTable::rho(double u) const {
  if (u < 0) throw std::domain_error("rho: u must be >= 0");
  if (u <= 1) return 1.0;
  if (u <= 2) return 1.0 - std::log(u);
  if (u > u_max_ + 1e-12) throw std::out_of_range("rho: u beyond the table");
  return series_rho(u);
}

double RhoTable::integral(double u) const {
  if (u < 0) throw std::domain_error("rho_integral: u must be >= 0");
  if (u > u_max_ + 1e-12) throw std::out_of_range("rho_integral: u beyond the table");
  return series_integral(u);
}

double RhoTable::tail(double u) const {
  if (u < 0) throw std::domain_error("rho_tail: u must be >= 0");
  if (u > u_max_ + 1e-12) throw std::out_of_range("rho_tail: u beyond the table");
  return series_tail(u);
}

const RhoTable& default_rho_table() {
  static const RhoTable table;
  return table;
}

double rho(double u) { return default_rho_table().rho(u); }
double rho_integral(double u) { return default_rho_table().integral(u); }
double rho_tail(double u) { return default_rho_table().tail(u); }

SmoothHarmonic smooth_harmonic(double y, double u) {
  if (y < 2) throw std::invalid_argument("smooth_harmonic: y must be >= 2");
  if (u < 0) throw std::invalid_argument("smooth_harmonic: u must be >= 0");
  const double bound = std::pow(y, u);
  if (bound > 1e8 * (1 + 1e-12)) throw std::invalid_argument("smooth_harmonic: y^u exceeds 10^8");
  const auto limit = static_cast<std::uint64_t>(std::floor(bound * (1 + 1e-14)));
  const auto primes = primes_in_range(2, static_cast<std::uint64_t>(std::floor(y)));
  SmoothHarmonic r;
  r.y = y;
  r.u = u;
  CompensatedSum s;
  std::uint64_t terms = 0;
  auto visit = [&](auto&& self, std::uint64_t n, std::size_t first) -> void {
    s.add(1.0 / static_cast<double>(n));
    ++terms;
    for (std::size_t i = first; i < primes.size(); ++i) {
      if (n > limit / primes[i]) break;
      self(self, n * primes[i], i);
    }
  };
  if (limit >= 1) visit(visit, 1, 0);
  r.exact = s.value();
  r.terms = terms;
  r.prediction = std::log(y) * rho_integral(u);
  r.gap = r.exact - r.prediction;
  return r;
}

double solve_u0(double y, double C) {
  if (y < 16) throw std::invalid_argument("solve_u0: y must be >= 16");
  const double target = C * std::log(std::log(y)) / std::log(y);
  if (!(target < constants::exp_gamma)) throw std::invalid_argument("solve_u0: target >= e^γ, no solution");
  if (!(target > 0)) throw std::invalid_argument("solve_u0: target must be positive");
  const RhoTable& t = default_rho_table();
  double lo = 0.0, hi = t.u_max();
  if (t.tail(hi) > target) throw std::out_of_range("solve_u0: root beyond the ρ table");
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    (t.tail(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qcs
