#include "qcs/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace qcs {

namespace {

struct Panel {
  double a, m, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

void refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth, QuadratureResult& out) {
  const double lm = 0.5 * (p.a + p.m), rm = 0.5 * (p.m + p.b);
  const double flm = f(lm), frm = f(rm);
  out.evaluations += 2;
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double diff = left + right - p.whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
    out.value += left + right + diff / 15.0;
    out.error_estimate += std::abs(diff) / 15.0;
    return;
  }
  refine(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, out);
  refine(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  int max_depth) {
  if (!(abs_tol > 0)) throw std::invalid_argument("adaptive_simpson: tolerance must be positive");
  QuadratureResult out;
  if (a == b) return out;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  out.evaluations = 3;
  refine(f, {a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}, abs_tol, max_depth, out);
  return out;
}

}  // namespace qcs
