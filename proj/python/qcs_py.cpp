#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qcs/arith.hpp"
#include "qcs/charsum.hpp"
#include "qcs/cli.hpp"
#include "qcs/dickman.hpp"
#include "qcs/dist.hpp"
#include "qcs/lfunc.hpp"
#include "qcs/polya.hpp"
#include "qcs/positivity.hpp"
#include "qcs/rmf.hpp"

namespace py = pybind11;
using namespace qcs;

namespace {

std::vector<std::int64_t> values_of(const std::vector<FundamentalDiscriminant>& ds) {
  std::vector<std::int64_t> out;
  out.reserve(ds.size());
  for (const auto& d : ds) out.push_back(d.value());
  return out;
}

}  // namespace

PYBIND11_MODULE(_qcs, m) {
  m.doc() = "Quadratic character sums, L-values and related models";
  m.attr("__version__") = QCS_VERSION;

  // arith
  m.def("kronecker", &kronecker, py::arg("d"), py::arg("n"));
  m.def("is_fundamental", &is_fundamental, py::arg("d"));
  m.def(
      "enumerate_fundamental",
      [](std::uint64_t x, const std::string& sign) { return values_of(enumerate_fundamental(x, parse_sign(sign))); },
      py::arg("x"), py::arg("sign") = "both");
  m.def(
      "prime_discriminants",
      [](std::uint64_t x, const std::string& sign) { return values_of(prime_discriminants(x, parse_sign(sign))); },
      py::arg("x"), py::arg("sign") = "both");
  m.def("divisor_fn", &divisor_fn, py::arg("k"), py::arg("n"));

  // charsum
  py::class_<PrefixSumStats>(m, "PrefixSumStats")
      .def_readonly("d", &PrefixSumStats::d)
      .def_readonly("M", &PrefixSumStats::M)
      .def_readonly("argmax_t", &PrefixSumStats::argmax_t)
      .def_readonly("min_prefix", &PrefixSumStats::min_prefix)
      .def_readonly("max_prefix", &PrefixSumStats::max_prefix)
      .def_readonly("m", &PrefixSumStats::m)
      .def("__repr__", [](const PrefixSumStats& s) {
        return "PrefixSumStats(d=" + std::to_string(s.d) + ", M=" + std::to_string(s.M) + ")";
      });
  m.def(
      "character_values", [](std::int64_t d) { return character_table(d).values; }, py::arg("d"));
  m.def(
      "scan",
      [](std::int64_t d) {
        CharacterWorkspace ws;
        return scan_discriminant(FundamentalDiscriminant(d), ws);
      },
      py::arg("d"));
  m.def(
      "batch_scan",
      [](std::uint64_t x, const std::string& sign, const std::string& family, unsigned workers) {
        py::gil_scoped_release release;
        return batch_scan(x, parse_sign(sign), parse_family(family), workers);
      },
      py::arg("x"), py::arg("sign") = "both", py::arg("family") = "all", py::arg("workers") = 1);

  // lfunc
  m.def(
      "l1", [](std::int64_t d) { return l1_exact(FundamentalDiscriminant(d)).value; }, py::arg("d"));
  m.def(
      "l1_twisted", [](std::int64_t d) { return l1_twisted_exact(FundamentalDiscriminant(d)).value; }, py::arg("d"));
  m.def(
      "l1_series",
      [](std::int64_t d, bool twist, std::uint64_t N) {
        const auto v = l1_series(FundamentalDiscriminant(d), twist ? Twist::chi_minus3 : Twist::none, N);
        return py::make_tuple(v.value, v.error_bound);
      },
      py::arg("d"), py::arg("twist") = false, py::arg("N") = 100000);
  m.def("mertens_product", &mertens_product, py::arg("y"));
  m.def("euler_product_smooth", &euler_product_smooth, py::arg("d"), py::arg("y"));

  // polya
  m.def(
      "polya_truncation",
      [](std::int64_t d, std::uint64_t t, std::uint64_t Z) { return polya_truncation(character_table(d), t, Z).value; },
      py::arg("d"), py::arg("t"), py::arg("Z"));
  m.def(
      "tail_statistic",
      [](std::int64_t d, double y, std::uint64_t Z, std::uint64_t R, const std::string& weight) {
        const TailSeries series(Z, Filter::rough(y), MultiplicativeWeight::by_name(weight, Z));
        return grid_max(character_table(d), series, Kernel::exp, R == 0 ? default_grid_size(Z) : R).value;
      },
      py::arg("d"), py::arg("y"), py::arg("Z"), py::arg("R") = 0, py::arg("weight") = "unit");

  // rmf
  m.def(
      "moment_exact_product",
      [](double y, unsigned k, std::uint64_t cutoff) {
        const auto p = moment_exact_product(y, k, cutoff);
        return py::make_tuple(p.value, p.tail_bound);
      },
      py::arg("y"), py::arg("k"), py::arg("cutoff"));
  m.def("moment_exact", &moment_exact, py::arg("y"), py::arg("k"), py::arg("cutoff"));
  m.def("divisor_square_sum", &divisor_square_sum, py::arg("k"), py::arg("y"), py::arg("N"), py::arg("prime_cap") = 0);
  m.def("moment_diagonal_k1", &moment_diagonal_k1, py::arg("y"), py::arg("N"));
  m.def(
      "moment_mc",
      [](double y, unsigned k, std::uint64_t N, std::uint64_t trials, std::uint64_t seed) {
        py::gil_scoped_release release;
        const auto e = moment_mc(y, k, N, trials, seed);
        return std::make_tuple(e.estimate, e.standard_error);
      },
      py::arg("y"), py::arg("k"), py::arg("N") = 0, py::arg("trials") = 1000, py::arg("seed") = 1);

  // dickman
  m.def("rho", &rho, py::arg("u"));
  m.def("rho_integral", &rho_integral, py::arg("u"));
  m.def("rho_tail", &rho_tail, py::arg("u"));
  m.def("solve_u0", &solve_u0, py::arg("y"), py::arg("C"));

  // positivity
  py::class_<PositivityRecord>(m, "PositivityRecord")
      .def_readonly("p", &PositivityRecord::p)
      .def_readonly("residue_class", &PositivityRecord::residue_class)
      .def_readonly("positive", &PositivityRecord::positive)
      .def_readonly("negative", &PositivityRecord::negative)
      .def_readonly("zeros", &PositivityRecord::zeros)
      .def_readonly("lam", &PositivityRecord::lambda);
  m.def("lambda_measure", &lambda_measure, py::arg("p"));
  m.def(
      "u_kernel",
      [](double alpha, std::uint64_t N) {
        const auto u = u_kernel(alpha, N);
        return py::make_tuple(u.value, u.truncation_bound);
      },
      py::arg("alpha"), py::arg("N") = 100000);
  m.def("u_kernel_threshold", &u_kernel_threshold);
  m.def(
      "primes_in_class",
      [](std::uint64_t x, double y, unsigned a, int eps) {
        return find_primes_in_class(x, prescribe_signs(y, a, constant_signs(y, eps))).primes;
      },
      py::arg("x"), py::arg("y"), py::arg("a") = 3, py::arg("eps") = 1);

  // dist
  m.def("compute_B0", []() { return compute_B0().value; });
  m.def("constants", []() {
    const auto c = compute_constants();
    py::dict d;
    d["B0"] = c.B0;
    d["eta"] = c.eta;
    d["e_gamma"] = c.e_gamma;
    d["pi"] = c.pi;
    return d;
  });
  m.def(
      "tabulate",
      [](std::uint64_t x, const std::string& family, const std::string& sign, const std::string& statistic,
         const std::vector<double>& tau) {
        const auto t = tabulate(x, FamilySpec{parse_family(family), parse_sign(sign)}, parse_statistic(statistic), tau);
        return py::make_tuple(t.counts, t.proportions, t.family_size);
      },
      py::arg("x"), py::arg("family") = "all", py::arg("sign") = "both", py::arg("statistic") = "m",
      py::arg("tau") = std::vector<double>{1.0, 1.5, 2.0});
  m.def(
      "theory_envelope",
      [](const std::string& theorem, double tau) {
        const auto e = theory_envelope(theorem, tau);
        return py::make_tuple(e.lower, e.upper);
      },
      py::arg("theorem"), py::arg("tau"));

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  py::register_exception<LambdaViolation>(m, "LambdaViolation", PyExc_RuntimeError);
}
