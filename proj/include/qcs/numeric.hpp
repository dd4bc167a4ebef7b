#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qcs {

/// Neumaier-compensated accumulator. Order-dependent, so callers that need
/// reproducible totals must feed terms in a fixed order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive Simpson quadrature on [a, b] with Richardson correction.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_depth = 50);

}  // namespace qcs
