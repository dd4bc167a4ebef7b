#include "qcs/dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcs/constants.hpp"
#include "qcs/lfunc.hpp"
#include "qcs/numeric.hpp"
#include "qcs/positivity.hpp"

namespace qcs {

B0Parts compute_B0(double tolerance) {
  const auto first = adaptive_simpson([](double y) { return y == 0.0 ? 1.0 : std::tanh(y) / y; }, 0.0, 1.0, tolerance);
  // (tanh y - 1)/y dy with t = e^{-y}: -2t / ((1 + t²)(-log t)) dt on (0, 1/e].
  const auto second = adaptive_simpson(
      [](double t) { return t == 0.0 ? 0.0 : -2.0 * t / ((1.0 + t * t) * -std::log(t)); }, 0.0, std::exp(-1.0),
      tolerance);
  B0Parts r;
  r.first = first.value;
  r.second = second.value;
  r.value = first.value + second.value;
  r.error_estimate = first.error_estimate + second.error_estimate;
  return r;
}

Constants compute_constants() {
  const auto b = compute_B0();
  Constants c;
  c.B0 = b.value;
  c.B0_first = b.first;
  c.B0_second = b.second;
  c.eta = constants::exp_neg_gamma * constants::log2;
  c.e_gamma = constants::exp_gamma;
  c.pi = constants::pi;
  return c;
}

Statistic parse_statistic(const std::string& s) {
  if (s == "m") return Statistic::m;
  if (s == "L1" || s == "l1") return Statistic::L1;
  if (s == "L1-twisted" || s == "l1-twisted" || s == "L1_twisted") return Statistic::L1_twisted;
  if (s == "lambda") return Statistic::lambda;
  throw std::invalid_argument("unknown statistic '" + s + "' (expected m, L1, L1-twisted or lambda)");
}

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::m: return "m";
    case Statistic::L1: return "L1";
    case Statistic::L1_twisted: return "L1-twisted";
    case Statistic::lambda: return "lambda";
  }
  return "?";
}

std::string FamilySpec::label() const {
  if (family == Family::all_fundamental) return "fundamental:" + to_string(sign);
  switch (sign) {
    case SignFilter::negative: return "prime:3mod4";
    case SignFilter::positive: return "prime:1mod4";
    case SignFilter::both: return "prime:all";
  }
  return "?";
}

std::vector<double> default_tau_grid(std::uint64_t x) {
  if (x < 16) throw std::invalid_argument("default_tau_grid: x must be >= 16");
  const double top = std::log(std::log(static_cast<double>(x))) + 1.0;
  std::vector<double> grid;
  for (int i = 10; i / 10.0 <= top + 1e-12; ++i) grid.push_back(i / 10.0);
  return grid;
}

double statistic_scale(Statistic statistic) {
  switch (statistic) {
    case Statistic::L1: return constants::exp_gamma;
    case Statistic::L1_twisted: return 2.0 * constants::exp_gamma / 3.0;
    default: return 1.0;
  }
}

std::vector<double> family_statistics(std::uint64_t x, const FamilySpec& family, Statistic statistic,
                                      unsigned workers) {
  if (statistic == Statistic::m) {
    std::vector<double> out;
    batch_scan_stream(x, family.sign, family.family, workers, [&](const PrefixSumStats& s) { out.push_back(s.m); });
    return out;
  }
  auto members = family_members(x, family.sign, family.family);
  std::function<double(const FundamentalDiscriminant&, CharacterWorkspace&)> fn;
  switch (statistic) {
    case Statistic::L1:
      fn = [](const FundamentalDiscriminant& d, CharacterWorkspace& ws) { return l1_exact(d, ws).value; };
      break;
    case Statistic::L1_twisted:
      std::erase_if(members, [](const FundamentalDiscriminant& d) { return d.value() == -3; });
      fn = [](const FundamentalDiscriminant& d, CharacterWorkspace& ws) { return l1_twisted_exact(d, ws).value; };
      break;
    case Statistic::lambda:
      if (family.family != Family::prime_only) {
        throw std::invalid_argument("lambda is defined on the prime family only");
      }
      fn = [](const FundamentalDiscriminant& d, CharacterWorkspace&) {
        const std::uint64_t p = d.modulus();
        thread_local LambdaWorkspace lw;
        return (p % 4 == 3 ? lambda_half_period(p, lw) : lambda_measure(p)).lambda;
      };
      break;
    case Statistic::m: break;
  }
  return map_family(members, workers, fn);
}

DistributionTable tabulate_values(std::vector<double> values, std::uint64_t x, const FamilySpec& family,
                                  Statistic statistic, const std::vector<double>& tau_grid) {
  if (values.empty()) throw std::invalid_argument("tabulate: empty family");
  if (!std::is_sorted(tau_grid.begin(), tau_grid.end())) throw std::invalid_argument("tabulate: τ grid must ascend");
  DistributionTable t;
  t.family = family.label();
  t.statistic = statistic;
  t.x = x;
  t.tau_grid = tau_grid;
  t.family_size = values.size();
  t.scale = statistic_scale(statistic);
  std::sort(values.begin(), values.end());
  for (const double tau : tau_grid) {
    const double threshold = t.scale * tau;
    const auto count = static_cast<std::uint64_t>(values.end() - std::upper_bound(values.begin(), values.end(), threshold));
    t.counts.push_back(count);
    t.proportions.push_back(static_cast<double>(count) / static_cast<double>(values.size()));
  }
  for (std::size_t i = 0; i < t.proportions.size(); ++i) {
    if (t.proportions[i] < 0.0 || t.proportions[i] > 1.0 || (i > 0 && t.proportions[i] > t.proportions[i - 1])) {
      throw std::logic_error("tabulate: proportions violate monotonicity or range");
    }
  }
  return t;
}

DistributionTable tabulate(std::uint64_t x, const FamilySpec& family, Statistic statistic,
                           const std::vector<double>& tau_grid, unsigned workers) {
  return tabulate_values(family_statistics(x, family, statistic, workers), x, family, statistic, tau_grid);
}

Envelope theory_envelope(const std::string& theorem, double tau) {
  if (!(tau >= 2)) throw std::invalid_argument("theory_envelope: requires τ >= 2");
  const double B0 = compute_B0().value;
  const double eta = constants::exp_neg_gamma * constants::log2;
  const double s3 = std::sqrt(3.0);
  Envelope e;
  e.theorem = theorem;
  e.tau = tau;
  if (theorem == "1.1" || theorem == "1.3") {
    e.lower = std::exp(-std::exp(tau - eta - B0) / tau);
    e.upper = std::exp(-std::exp(tau - eta - constants::log2 - 2.0) / tau);
  } else if (theorem == "1.2" || theorem == "1.4") {
    e.lower = std::exp(-std::exp(s3 * tau - B0) / (s3 * tau));
    e.upper = std::exp(-std::exp(s3 * tau) / tau);  // C_2 = 1
  } else if (theorem == "1.5") {
    e.lower = std::exp(-std::exp(tau - B0) / tau);
    e.upper = std::exp(-std::exp(tau + constants::log2 - 2.0) / tau);
  } else {
    throw std::invalid_argument("theory_envelope: unknown theorem '" + theorem + "'");
  }
  return e;
}

SignDominance sign_dominance(std::uint64_t x, std::size_t top, unsigned workers) {
  SignDominance r;
  r.x = x;
  auto better = [](const PrefixSumStats& a, const PrefixSumStats& b) {
    if (a.m != b.m) return a.m > b.m;
    if (a.modulus() != b.modulus()) return a.modulus() < b.modulus();
    return a.d < b.d;
  };
  // Bounded selection while streaming: the scan itself is the expensive part.
  std::vector<PrefixSumStats> best;
  batch_scan_stream(x, SignFilter::both, Family::all_fundamental, workers, [&](const PrefixSumStats& s) {
    if (best.size() < top) {
      best.push_back(s);
      std::push_heap(best.begin(), best.end(), better);
    } else if (top > 0 && better(s, best.front())) {
      std::pop_heap(best.begin(), best.end(), better);
      best.back() = s;
      std::push_heap(best.begin(), best.end(), better);
    }
  });
  std::sort(best.begin(), best.end(), better);
  r.top = std::move(best);
  r.negative = static_cast<std::uint64_t>(
      std::count_if(r.top.begin(), r.top.end(), [](const PrefixSumStats& s) { return s.d < 0; }));
  r.negative_share = r.top.empty() ? 0.0 : static_cast<double>(r.negative) / static_cast<double>(r.top.size());
  return r;
}

}  // namespace qcs
