#include "qcs/polya.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "qcs/constants.hpp"
#include "qcs/fft.hpp"
#include "qcs/numeric.hpp"

namespace qcs {

AlphaGrid::AlphaGrid(std::uint64_t r) : R(r) {
  if (r == 0) throw std::invalid_argument("AlphaGrid: R must be positive");
}

MultiplicativeWeight MultiplicativeWeight::unit(std::uint64_t limit) {
  std::vector<double> v(limit + 1, 1.0);
  v[0] = 0.0;
  return {"unit", std::move(v)};
}

MultiplicativeWeight MultiplicativeWeight::twist(std::uint64_t limit) {
  std::vector<double> v(limit + 1, 0.0);
  if (limit >= 1) v[1] = 1.0;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (n % 3 == 0) {
      v[n] = -v[n / 3];
    } else {
      v[n] = n % 3 == 1 ? 1.0 : -1.0;
    }
  }
  return {"twist", std::move(v)};
}

MultiplicativeWeight MultiplicativeWeight::from_primes(std::string label, std::uint32_t limit,
                                                       const std::function<double(std::uint32_t)>& at_prime) {
  std::vector<double> v(static_cast<std::size_t>(limit) + 1, 0.0);
  if (limit >= 1) v[1] = 1.0;
  if (limit >= 2) {
    const PrimeTable table(limit);
    for (std::uint32_t n = 2; n <= limit; ++n) {
      const std::uint32_t p = table.smallest_factor(n);
      if (p == n) {
        const double h = at_prime(p);
        if (!(std::abs(h) <= 1.0)) throw std::invalid_argument("MultiplicativeWeight: |h(p)| must be <= 1");
        v[n] = h;
      } else {
        v[n] = v[p] * v[n / p];
      }
    }
  }
  return {std::move(label), std::move(v)};
}

MultiplicativeWeight MultiplicativeWeight::by_name(const std::string& name, std::uint64_t limit) {
  if (name == "unit" || name == "one" || name == "1") return unit(limit);
  if (name == "twist") return twist(limit);
  throw std::invalid_argument("unknown weight '" + name + "' (expected unit or twist)");
}

std::string Filter::label() const {
  switch (kind) {
    case Kind::all: return "all";
    case Kind::smooth: return "smooth";
    case Kind::rough: return "rough";
  }
  return "?";
}

TailSeries::TailSeries(std::uint64_t z, Filter f, const MultiplicativeWeight& h) : Z(z), filter(f), h_label(h.label()) {
  if (z < 1) throw std::invalid_argument("TailSeries: Z must be >= 1");
  if (z > 0xffffffffull) throw std::invalid_argument("TailSeries: Z exceeds 32 bits");
  if (h.limit() < z) throw std::invalid_argument("TailSeries: weight table shorter than Z");
  std::vector<std::uint32_t> gpf;
  if (f.kind != Filter::Kind::all && z >= 2) gpf = PrimeTable(static_cast<std::uint32_t>(z)).largest_factor_table(static_cast<std::uint32_t>(z));
  CompensatedSum total;
  for (std::uint64_t m = 1; m <= z; ++m) {
    if (f.kind != Filter::Kind::all) {
      const bool smooth = m == 1 || gpf[m] <= f.y;
      if (smooth != (f.kind == Filter::Kind::smooth)) continue;
    }
    const double hm = h(m);
    if (hm == 0.0) continue;
    n.push_back(static_cast<std::uint32_t>(m));
    weight.push_back(hm / static_cast<double>(m));
    total.add(std::abs(hm) / static_cast<double>(m));
  }
  mass = total.value();
}

namespace {

// Σ_{0<=k<=K} 1/(r + kq).
double progression_harmonic(std::uint64_t r, std::uint64_t q, std::uint64_t K) {
  if (K < 64) {
    CompensatedSum s;
    for (std::uint64_t k = K + 1; k-- > 0;) s.add(1.0 / static_cast<double>(r + k * q));
    return s.value();
  }
  const double a = static_cast<double>(r) / static_cast<double>(q);
  return (boost::math::digamma(a + static_cast<double>(K) + 1.0) - boost::math::digamma(a)) / static_cast<double>(q);
}

// a_r = χ(r) Σ_{1<=|n|<=Z, n ≡ r mod q} 1/n.
std::vector<double> residue_coefficients(const CharacterTable& table, std::uint64_t Z) {
  const std::uint64_t q = table.modulus();
  std::vector<double> plus(q, 0.0);
  for (std::uint64_t r = 1; r < q && r <= Z; ++r) {
    if (table.values[r] == 0) continue;
    plus[r] = progression_harmonic(r, q, (Z - r) / q);
  }
  std::vector<double> a(q, 0.0);
  for (std::uint64_t r = 1; r < q; ++r) {
    const int c = table.values[r];
    if (c != 0) a[r] = c * (plus[r] - plus[q - r]);
  }
  return a;
}

}  // namespace

PolyaValue polya_truncation(const CharacterTable& table, std::uint64_t t, std::uint64_t Z) {
  const std::uint64_t q = table.modulus();
  if (t < 1 || t > q) throw std::invalid_argument("polya_truncation: t must lie in [1, |d|]");
  if (Z < 1) throw std::invalid_argument("polya_truncation: Z must be >= 1");
  const auto a = residue_coefficients(table, Z);
  const double w = 2.0 * constants::pi / static_cast<double>(q);
  CompensatedSum s;
  for (std::uint64_t r = 1; r < q; ++r) {
    if (a[r] == 0.0) continue;
    const double x = w * static_cast<double>((r * t) % q);
    s.add(a[r] * (table.d.negative() ? 1.0 - std::cos(x) : std::sin(x)));
  }
  return {std::sqrt(static_cast<double>(q)) / (2.0 * constants::pi) * s.value(), Z < q};
}

std::vector<double> polya_truncation_all(const CharacterTable& table, std::uint64_t Z) {
  const std::uint64_t q = table.modulus();
  if (Z < 1) throw std::invalid_argument("polya_truncation_all: Z must be >= 1");
  const auto a = residue_coefficients(table, Z);
  fft::ComplexForward dft(q);
  CompensatedSum A;
  for (std::uint64_t r = 0; r < q; ++r) {
    dft.input()[r] = a[r];
    A.add(a[r]);
  }
  dft.execute();
  const double scale = std::sqrt(static_cast<double>(q)) / (2.0 * constants::pi);
  std::vector<double> out(q + 1);
  for (std::uint64_t t = 0; t <= q; ++t) {
    const std::complex<double> D = dft.output()[t % q];
    out[t] = scale * (table.d.negative() ? A.value() - D.real() : -D.imag());
  }
  out[0] = 0.0;
  out[q] = 0.0;
  return out;
}

PolyaErrorProfile polya_error_profile(const CharacterTable& table, std::uint64_t Z) {
  const std::uint64_t q = table.modulus();
  const auto trunc = polya_truncation_all(table, Z);
  PolyaErrorProfile p;
  p.d = table.d.value();
  p.Z = Z;
  p.bound = 1.0 + static_cast<double>(q) * std::log(static_cast<double>(q)) / static_cast<double>(Z);
  std::int64_t S = 0;
  CompensatedSum mean;
  for (std::uint64_t t = 1; t <= q; ++t) {
    const int c = table.values[t % q];
    S += c;
    const double raw = std::abs(trunc[t] - static_cast<double>(S));
    const double mid = std::abs(trunc[t] - (static_cast<double>(S) - 0.5 * c));
    p.max_error = std::max(p.max_error, raw);
    p.max_midpoint_error = std::max(p.max_midpoint_error, mid);
    mean.add(mid);
  }
  p.mean_midpoint_error = mean.value() / static_cast<double>(q);
  return p;
}

std::complex<double> kernel_sum(const CharacterTable& table, double alpha, const TailSeries& series, Kernel kernel) {
  const double w = 2.0 * constants::pi;
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < series.n.size(); ++i) {
    const std::uint64_t m = series.n[i];
    const int c = table(m);
    if (c == 0) continue;
    const double coef = c * series.weight[i];
    double x = static_cast<double>(m) * alpha;
    x -= std::floor(x);
    if (kernel == Kernel::exp) {
      re += coef * std::cos(w * x);
      im += coef * std::sin(w * x);
    } else {
      re += coef * (1.0 - std::cos(w * x));
    }
  }
  return {re, im};
}

std::complex<double> kernel_sum(const CharacterTable& table, double alpha, std::uint64_t Z, Filter filter,
                                const MultiplicativeWeight& h, Kernel kernel) {
  return kernel_sum(table, alpha, TailSeries(Z, filter, h), kernel);
}

std::uint64_t default_grid_size(std::uint64_t Z) { return std::max<std::uint64_t>(4 * Z, 4096); }

TailStatistic grid_max(std::int64_t d, std::span<const std::int8_t> chi, const TailSeries& series, Kernel kernel,
                       std::uint64_t R) {
  if (R < 2) throw std::invalid_argument("grid_max: R must be >= 2");
  if (chi.empty()) throw std::invalid_argument("grid_max: empty character values");
  thread_local std::unique_ptr<fft::RealForward> dft;
  if (!dft || dft->size() != R) dft = std::make_unique<fft::RealForward>(R);
  double* in = dft->input();
  std::fill_n(in, R, 0.0);
  double total = 0.0, moment = 0.0;
  const std::size_t period = chi.size();
  for (std::size_t i = 0; i < series.n.size(); ++i) {
    const std::uint64_t m = series.n[i];
    const int c = chi[m % period];
    if (c == 0) continue;
    const double coef = c * series.weight[i];
    in[m % R] += coef;
    total += coef;
    moment += std::abs(coef) * static_cast<double>(m);
  }
  dft->execute();
  const std::complex<double>* X = dft->output();
  TailStatistic s;
  s.d = d;
  s.y = series.filter.y;
  s.Z = series.Z;
  s.R = R;
  s.h_label = series.h_label;
  // |f(b/R)| = |X_b| and X_{R-b} = conj(X_b), so half the spectrum covers the grid.
  std::uint64_t best_k = 0;
  double best = -1.0;
  for (std::uint64_t k = 0; k <= R / 2; ++k) {
    const double v = kernel == Kernel::exp ? std::abs(X[k]) : std::abs(total - X[k].real());
    if (v > best) best = v, best_k = k;
  }
  s.value = best;
  s.argmax_alpha = static_cast<double>(best_k) / static_cast<double>(R);
  s.discretization_bound = constants::pi * moment / static_cast<double>(R);
  s.discretization_dominated = R < series.Z;
  return s;
}

TailStatistic grid_max(const CharacterTable& table, const TailSeries& series, Kernel kernel, std::uint64_t R) {
  return grid_max(table.d.value(), table.values, series, kernel, R);
}

std::vector<ExceedanceRow> exceedance_rows(const std::vector<double>& statistics, const std::vector<double>& A_grid) {
  if (statistics.empty()) throw std::invalid_argument("exceedance_rows: empty family");
  std::vector<ExceedanceRow> rows;
  for (const double A : A_grid) {
    ExceedanceRow row;
    row.A = A;
    row.threshold = constants::exp_gamma * A;
    row.count = static_cast<std::uint64_t>(
        std::count_if(statistics.begin(), statistics.end(), [&](double v) { return v > row.threshold; }));
    row.fraction = static_cast<double>(row.count) / static_cast<double>(statistics.size());
    if (row.count > 0) row.log_fraction = std::log(row.fraction);
    rows.push_back(row);
  }
  return rows;
}

TailSurvey tail_exceedance_survey(const TailSurveyConfig& config) {
  if (config.y < 2) throw std::invalid_argument("tail_exceedance_survey: y must be >= 2");
  if (config.Z < 1) throw std::invalid_argument("tail_exceedance_survey: Z must be >= 1");
  if (config.A_grid.empty()) throw std::invalid_argument("tail_exceedance_survey: empty A grid");
  TailSurvey out;
  out.config = config;
  if (out.config.R == 0) out.config.R = default_grid_size(config.Z);
  const auto members = family_members(config.x, config.sign, config.family);
  if (members.empty()) throw std::invalid_argument("tail_exceedance_survey: empty family");
  out.family_size = members.size();
  const auto h = MultiplicativeWeight::by_name(config.weight, config.Z);
  const TailSeries series(config.Z, Filter::rough(config.y), h);
  out.mass = series.mass;
  const std::uint64_t R = out.config.R;
  std::function<double(const FundamentalDiscriminant&, CharacterWorkspace&)> fn =
      [&](const FundamentalDiscriminant& d, CharacterWorkspace& ws) {
        const std::uint64_t len = std::min<std::uint64_t>(d.modulus(), config.Z + 1);
        fill_character_values(d, len, ws);
        return grid_max(d.value(), ws.values, series, Kernel::exp, R).value;
      };
  out.statistics = map_family(members, config.workers, fn);
  double moment = 0.0;
  for (std::size_t i = 0; i < series.n.size(); ++i) moment += std::abs(series.weight[i]) * series.n[i];
  out.discretization_bound = constants::pi * moment / static_cast<double>(R);
  out.rows = exceedance_rows(out.statistics, config.A_grid);
  return out;
}

SmoothTailCheck smooth_tail_bound_check(double y, std::uint64_t Z) {
  if (y < 2) throw std::invalid_argument("smooth_tail_bound_check: y must be >= 2");
  if (Z < 1) throw std::invalid_argument("smooth_tail_bound_check: Z must be >= 1");
  if (Z > (std::uint64_t{1} << 50)) throw std::invalid_argument("smooth_tail_bound_check: Z too large");
  const auto primes = primes_in_range(2, static_cast<std::uint64_t>(std::floor(y)));
  const std::uint64_t limit = Z * 1000;
  constexpr std::uint64_t max_terms = 200'000'000;
  CompensatedSum decade[3];
  std::uint64_t terms = 0;
  // Every y-smooth n <= limit, generated with nondecreasing prime index.
  auto visit = [&](auto&& self, std::uint64_t n, std::size_t first) -> void {
    if (n > Z) {
      if (++terms > max_terms) throw std::runtime_error("smooth_tail_bound_check: too many smooth numbers");
      const int k = n <= 10 * Z ? 0 : (n <= 100 * Z ? 1 : 2);
      decade[k].add(1.0 / static_cast<double>(n));
    }
    for (std::size_t i = first; i < primes.size(); ++i) {
      if (n > limit / primes[i]) break;
      self(self, n * primes[i], i);
    }
  };
  visit(visit, 1, 0);
  SmoothTailCheck c;
  c.y = y;
  c.Z = Z;
  c.terms = terms;
  const double d0 = decade[0].value(), d1 = decade[1].value(), d2 = decade[2].value();
  c.exact = d0 + d1 + d2;
  if (d1 > 0 && d2 > 0) {
    const double r = std::min(d2 / d1, 0.999);
    c.extrapolated = d2 * r / (1.0 - r);
  }
  c.value = c.exact + c.extrapolated;
  c.reference = std::exp(-std::sqrt(std::log(y)));
  return c;
}

}  // namespace qcs
