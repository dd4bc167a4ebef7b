#include "qcs/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "qcs/charsum.hpp"
#include "qcs/dickman.hpp"
#include "qcs/dist.hpp"
#include "qcs/export.hpp"
#include "qcs/lfunc.hpp"
#include "qcs/parallel.hpp"
#include "qcs/polya.hpp"
#include "qcs/positivity.hpp"
#include "qcs/rmf.hpp"

namespace qcs {
namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string x, y, z, grid, tau, sign = "both", family = "all", out = "-", format, statistic = "m";
  std::string d, mode, H, y0, k, n, trials, u, C, A;
  std::string weight = "unit";
  bool twist = false;
  unsigned workers = default_workers();
  std::uint64_t seed = 0x5EED;
};

std::uint64_t parse_count(const std::string& name, const std::string& s) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used == s.size() && s.find('-') == std::string::npos) return v;
    const double dv = std::stod(s, &used);
    if (used == s.size() && dv >= 0 && dv < 9.2e18 && dv == std::floor(dv)) return static_cast<std::uint64_t>(dv);
  } catch (const std::exception&) {
  }
  throw UsageError("--" + name + ": expected a non-negative integer, got '" + s + "'");
}

double parse_real(const std::string& name, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--" + name + ": expected a number, got '" + s + "'");
}

std::int64_t parse_int(const std::string& name, const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--" + name + ": expected an integer, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& name, const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse_real(name, item));
  }
  if (out.empty()) throw UsageError("--" + name + ": empty list");
  return out;
}

std::uint64_t require_count(const std::string& name, const std::string& s) {
  if (s.empty()) throw UsageError("--" + name + " is required");
  return parse_count(name, s);
}

template <class F>
auto usage_wrap(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

/// Where a command's table and scalar results go.
struct Output {
  std::string command;
  CsvTable table;
  std::vector<std::pair<std::string, std::string>> results;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::optional<std::string> text;  ///< replaces the CSV when no format is requested
  std::function<std::string()> svg;
};

std::string fmt_opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void add_common(Output& o, const Options& opt) {
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) o.parameters.emplace_back(key, v);
  };
  put("x", opt.x);
  put("y", opt.y);
  put("z", opt.z);
  put("grid", opt.grid);
  put("tau", opt.tau);
  put("sign", opt.sign);
  put("family", opt.family);
  put("statistic", opt.statistic);
  put("d", opt.d);
  put("mode", opt.mode);
  put("H", opt.H);
  put("y0", opt.y0);
  put("k", opt.k);
  put("n", opt.n);
  put("trials", opt.trials);
  put("u", opt.u);
  put("C", opt.C);
  put("A", opt.A);
  put("weight", opt.twist ? std::string("twist") : opt.weight);
  o.parameters.emplace_back("workers", std::to_string(opt.workers));
}

FamilySpec family_spec(const Options& opt) {
  return usage_wrap([&] { return FamilySpec{parse_family(opt.family), parse_sign(opt.sign)}; });
}

void cmd_scan(const Options& opt, Output& o) {
  const auto x = require_count("x", opt.x);
  const auto f = family_spec(opt);
  o.table.header = {"d", "M", "argmax_t", "min_prefix", "max_prefix", "m"};
  usage_wrap([&] {
    batch_scan_stream(x, f.sign, f.family, opt.workers, [&](const PrefixSumStats& s) {
      o.table.rows.push_back({std::to_string(s.d), std::to_string(s.M), std::to_string(s.argmax_t),
                              std::to_string(s.min_prefix), std::to_string(s.max_prefix), format_double(s.m)});
    });
    return 0;
  });
  o.results.emplace_back("records", std::to_string(o.table.rows.size()));
}

std::optional<std::string> envelope_theorem(const FamilySpec& f, Statistic s) {
  if (s == Statistic::m) {
    if (f.sign == SignFilter::negative) return f.family == Family::prime_only ? "1.3" : "1.1";
    if (f.sign == SignFilter::positive) return f.family == Family::prime_only ? "1.4" : "1.2";
  }
  if (s == Statistic::L1 && f.family == Family::prime_only) return "1.5";
  return std::nullopt;
}

void cmd_dist(const Options& opt, Output& o) {
  const auto x = require_count("x", opt.x);
  const auto f = family_spec(opt);
  const Statistic statistic = usage_wrap([&] { return parse_statistic(opt.statistic); });
  const std::vector<double> grid = opt.tau.empty() ? usage_wrap([&] { return default_tau_grid(x); })
                                                   : parse_list("tau", opt.tau);
  if (!std::is_sorted(grid.begin(), grid.end())) throw UsageError("--tau must be ascending");
  const auto table = usage_wrap([&] { return tabulate(x, f, statistic, grid, opt.workers); });
  o.table = distribution_csv({table});
  o.results.emplace_back("family_size", std::to_string(table.family_size));
  o.results.emplace_back("scale", format_double(table.scale));
  o.svg = [table, f, statistic] {
    std::vector<Overlay> overlays;
    const auto theorem = envelope_theorem(f, statistic);
    const double top = table.tau_grid.back();
    if (theorem && top >= 2.0) {
      Overlay lo{"lower envelope (constants = 1)", {}, {}}, hi{"upper envelope (constants = 1)", {}, {}};
      for (int i = 0; 2.0 + 0.05 * i <= top + 1e-12; ++i) {
        const auto e = theory_envelope(*theorem, 2.0 + 0.05 * i);
        lo.tau.push_back(e.tau), lo.proportion.push_back(e.lower);
        hi.tau.push_back(e.tau), hi.proportion.push_back(e.upper);
      }
      overlays = {lo, hi};
    }
    return svg_plot({table}, overlays, table.family + " " + to_string(statistic));
  };
}

void cmd_lfunc(const Options& opt, Output& o) {
  o.table.header = {"d", "twist", "value", "method", "error_bound"};
  const Twist twist = opt.twist ? Twist::chi_minus3 : Twist::none;
  auto row = [&](const LValue& v) {
    o.table.rows.push_back(
        {std::to_string(v.d), to_string(v.twist), format_double(v.value), to_string(v.method), format_double(v.error_bound)});
  };
  if (!opt.d.empty()) {
    const auto d = usage_wrap([&] { return FundamentalDiscriminant(parse_int("d", opt.d)); });
    if (twist == Twist::chi_minus3 && d.value() == -3) throw UsageError("the twist by χ_{-3} is principal for d = -3");
    row(twist == Twist::none ? l1_exact(d) : l1_twisted_exact(d));
    return;
  }
  const auto x = require_count("x", opt.x);
  const auto f = family_spec(opt);
  auto members = usage_wrap([&] { return family_members(x, f.sign, f.family); });
  if (twist == Twist::chi_minus3) std::erase_if(members, [](const FundamentalDiscriminant& d) { return d.value() == -3; });
  const std::function<LValue(const FundamentalDiscriminant&, CharacterWorkspace&)> fn =
      [twist](const FundamentalDiscriminant& d, CharacterWorkspace& ws) {
        return twist == Twist::none ? l1_exact(d, ws) : l1_twisted_exact(d, ws);
      };
  for (const auto& v : map_family(members, opt.workers, fn)) row(v);
}

void record_rows(CsvTable& t, const std::vector<PositivityRecord>& records) {
  t.header = {"p", "residue_class", "positive", "negative", "zeros", "lambda"};
  for (const auto& r : records) {
    t.rows.push_back({std::to_string(r.p), std::to_string(r.residue_class), std::to_string(r.positive),
                      std::to_string(r.negative), std::to_string(r.zeros), format_double(r.lambda)});
  }
}

void cmd_positivity(const Options& opt, Output& o) {
  const auto x = require_count("x", opt.x);
  const std::string mode = opt.mode.empty() ? "survey" : opt.mode;
  if (mode == "survey") {
    const auto s = usage_wrap([&] { return positivity_survey(x, opt.workers); });
    record_rows(o.table, s.records);
    o.results.emplace_back("min_lambda", format_double(s.min_lambda));
    o.results.emplace_back("argmin_p", std::to_string(s.argmin_p));
    return;
  }
  ExtremalParams params;
  if (mode == "large") {
    params.mode = ExtremalMode::large;
  } else if (mode == "small") {
    params.mode = ExtremalMode::small;
  } else {
    throw UsageError("--mode must be survey, large or small for positivity");
  }
  if (!opt.y.empty()) params.y = parse_real("y", opt.y);
  if (!opt.H.empty()) params.H = parse_real("H", opt.H);
  if (!opt.y0.empty()) params.y0 = parse_real("y0", opt.y0);
  const auto r = usage_wrap([&] { return extremal_search(x, params, opt.workers); });
  record_rows(o.table, r.ranked);
  o.results.emplace_back("modulus", std::to_string(r.prescription.Q));
  o.results.emplace_back("residue", std::to_string(r.prescription.b));
  o.results.emplace_back("population_size", std::to_string(r.population_size));
  o.results.emplace_back("population_mean", format_double(r.population_mean));
  o.results.emplace_back("class_size", std::to_string(r.ranked.size()));
  o.results.emplace_back("class_mean", format_double(r.class_mean));
  o.results.emplace_back("gap", format_double(r.gap));
  if (r.T) o.results.emplace_back("T", format_double(*r.T));
  if (!r.diagnostic.empty()) o.results.emplace_back("diagnostic", r.diagnostic);
}

void cmd_rmf(const Options& opt, Output& o) {
  const double y = opt.y.empty() ? 10.0 : parse_real("y", opt.y);
  const auto k = static_cast<unsigned>(opt.k.empty() ? 1 : parse_count("k", opt.k));
  const std::uint64_t cutoff = opt.z.empty() ? 1000000 : parse_count("z", opt.z);
  if (k == 0) throw UsageError("--k must be positive");
  o.table.header = {"quantity", "y", "k", "N", "value", "error"};
  auto row = [&](const char* q, std::uint64_t N, double v, double e) {
    o.table.rows.push_back({q, format_double(y), std::to_string(k), std::to_string(N), format_double(v), format_double(e)});
  };
  const auto product = usage_wrap([&] { return moment_exact_product(y, k, cutoff); });
  row("product", cutoff, product.value, product.tail_bound);
  row("moment_exact", cutoff, usage_wrap([&] { return moment_exact(y, k, cutoff); }), 0.0);
  const std::uint64_t trials = opt.trials.empty() ? 0 : parse_count("trials", opt.trials);
  if (trials > 0) {
    const std::uint64_t N = opt.n.empty() ? 0 : parse_count("n", opt.n);
    const auto mc = usage_wrap([&] { return moment_mc(y, k, N, trials, opt.seed, opt.workers); });
    row("moment_mc", mc.N, mc.estimate, mc.standard_error);
    if (k == 1) row("diagonal_k1", mc.N, moment_diagonal_k1(y, mc.N), 0.0);
    o.results.emplace_back("bias_estimate", format_double(mc.bias_estimate));
  }
}

void cmd_dickman(const Options& opt, Output& o) {
  if (!opt.C.empty()) {
    const double y = opt.y.empty() ? 1e6 : parse_real("y", opt.y);
    const double C = parse_real("C", opt.C);
    o.table.header = {"y", "C", "u0", "tail"};
    const double u0 = usage_wrap([&] { return solve_u0(y, C); });
    o.table.rows.push_back({format_double(y), format_double(C), format_double(u0), format_double(rho_tail(u0))});
    return;
  }
  const auto us = opt.u.empty() ? std::vector<double>{1, 1.5, 2, 2.5, 3, 4, 5, 6, 8, 10} : parse_list("u", opt.u);
  o.table.header = {"u", "rho", "integral", "tail"};
  for (const double u : us) {
    usage_wrap([&] {
      o.table.rows.push_back({format_double(u), format_double(rho(u)), format_double(rho_integral(u)), format_double(rho_tail(u))});
      return 0;
    });
  }
}

void cmd_tail(const Options& opt, Output& o) {
  TailSurveyConfig c;
  c.x = require_count("x", opt.x);
  c.y = opt.y.empty() ? 30.0 : parse_real("y", opt.y);
  c.Z = opt.z.empty() ? 10000 : parse_count("z", opt.z);
  c.R = opt.grid.empty() ? 0 : parse_count("grid", opt.grid);
  c.A_grid = parse_list("A", opt.A.empty() ? std::string("0.5,1,1.5") : opt.A);
  const auto f = family_spec(opt);
  c.sign = f.sign;
  c.family = f.family;
  c.weight = opt.twist ? "twist" : opt.weight;
  c.workers = opt.workers;
  const auto s = usage_wrap([&] { return tail_exceedance_survey(c); });
  o.table.header = {"A", "threshold", "count", "fraction", "log_fraction"};
  for (const auto& r : s.rows) {
    o.table.rows.push_back({format_double(r.A), format_double(r.threshold), std::to_string(r.count),
                            format_double(r.fraction), fmt_opt(r.log_fraction)});
  }
  o.results.emplace_back("family_size", std::to_string(s.family_size));
  o.results.emplace_back("mass", format_double(s.mass));
  o.results.emplace_back("discretization_bound", format_double(s.discretization_bound));
}

void cmd_constants(const Options&, Output& o) {
  const auto c = compute_constants();
  o.table.header = {"name", "value"};
  const std::pair<const char*, double> items[] = {{"B0", c.B0},   {"B0_first", c.B0_first}, {"B0_second", c.B0_second},
                                                  {"eta", c.eta}, {"e_gamma", c.e_gamma},   {"pi", c.pi}};
  std::string text;
  for (const auto& [name, v] : items) {
    o.table.rows.push_back({name, format_double(v)});
    o.results.emplace_back(name, format_double(v));
    text += std::string(name) + "=" + format_double(v) + "\n";
  }
  o.text = text;
}

void emit(const Output& o, const Options& opt, double wall, std::ostream& out) {
  auto write = [&](const std::string& text) {
    if (opt.out == "-") {
      out << text;
      out.flush();
    } else {
      write_text(opt.out, text);
    }
  };
  const std::string format = opt.format.empty() ? (o.text ? "text" : "csv") : opt.format;
  if (format == "text") {
    write(*o.text);
  } else if (format == "csv") {
    std::ostringstream s;
    write_csv(s, o.table);
    write(s.str());
  } else if (format == "json") {
    RunManifest m;
    m.command = o.command;
    m.seed = opt.seed;
    m.parameters = o.parameters;
    m.results = o.results;
    m.table = o.table;
    m.wall_seconds = wall;
    write(manifest_json(m));
  } else if (format == "svg") {
    if (!o.svg) throw UsageError("--format svg is only available for dist");
    write(o.svg());
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadratic character sums: distributions, L-values, positivity and model computations", "qcs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options opt;
  struct {
    std::vector<std::string> tau, u, A;
  } lists;
  app.add_option("--x", opt.x, "upper bound for |d| or p");
  app.add_option("--y", opt.y, "friability parameter y");
  app.add_option("--z", opt.z, "truncation Z (tail) or prime cutoff (rmf)");
  app.add_option("--grid", opt.grid, "alpha-grid size R");
  app.add_option("--tau", lists.tau, "comma-separated tau grid");
  app.add_option("--sign", opt.sign, "-, + or both")->capture_default_str();
  app.add_option("--family", opt.family, "all or prime")->capture_default_str();
  app.add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "random seed")->capture_default_str();
  app.add_option("--out", opt.out, "output path, - for stdout")->capture_default_str();
  app.add_option("--format", opt.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--statistic", opt.statistic, "m, L1, L1-twisted or lambda")->capture_default_str();
  app.add_option("--d", opt.d, "single discriminant");
  app.add_flag("--twist", opt.twist, "twist by chi_{-3}");
  app.add_option("--weight", opt.weight, "unit or twist")->capture_default_str();
  app.add_option("--mode", opt.mode, "positivity: survey, large or small");
  app.add_option("--H", opt.H, "small mode: psi_p(q) = h(q) for q <= H");
  app.add_option("--y0", opt.y0, "small mode: psi_p(q) = -1 for H < q <= y0");
  app.add_option("--k", opt.k, "moment order");
  app.add_option("--n", opt.n, "truncation N");
  app.add_option("--trials", opt.trials, "Monte Carlo trials");
  app.add_option("--u", lists.u, "comma-separated u values");
  app.add_option("--C", opt.C, "u0 constant");
  app.add_option("--A", lists.A, "comma-separated thresholds A");

  using Command = void (*)(const Options&, Output&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"scan", "prefix-sum maxima m(chi_d) per discriminant", cmd_scan},
      {"dist", "exceedance table of a statistic over a family", cmd_dist},
      {"lfunc", "L(1, chi_d), single or batch", cmd_lfunc},
      {"positivity", "lambda(p) survey or extremal search", cmd_positivity},
      {"rmf", "moments of the random multiplicative model", cmd_rmf},
      {"dickman", "rho, its integrals, and u0", cmd_dickman},
      {"tail", "non-friable tail exceedance survey", cmd_tail},
      {"constants", "B0, eta and friends", cmd_constants},
  };
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help)->fallthrough();

  std::vector<const char*> argv{"qcs"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& item : v) s += (s.empty() ? "" : ",") + item;
      return s;
    };
    opt.tau = join(lists.tau);
    opt.u = join(lists.u);
    opt.A = join(lists.A);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::FileError& e) {
    err << "qcs: " << e.what() << "\n";
    return 3;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  for (const auto& [name, help, fn] : commands) {
    if (!app.got_subcommand(name)) continue;
    Output o;
    o.command = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      add_common(o, opt);
      fn(opt, o);
      if (opt.format == "svg" && !o.svg) throw UsageError("--format svg is only available for dist");
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      emit(o, opt, wall, out);
    } catch (const IoError& e) {
      err << "qcs: " << e.what() << "\n";
      return 3;
    } catch (const UsageError& e) {
      err << "qcs " << name << ": " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      err << "qcs " << name << ": " << e.what() << "\n";
      return 2;
    }
    return 0;
  }
  return 1;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace qcs
