#include "qcs/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>
#include <utility>

namespace qcs::fft {

namespace {

// The FFTW planner is not thread-safe; execution of a finished plan on
// fresh (equally aligned) buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan real_plan(std::size_t n) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (!p) throw std::bad_alloc();
  cache.emplace(n, p);
  return p;
}

fftw_plan complex_plan(std::size_t n) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  fftw_complex* in = fftw_alloc_complex(n);
  fftw_complex* out = fftw_alloc_complex(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (!p) throw std::bad_alloc();
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealForward::RealForward(std::size_t n)
    : n_(n), in_(fftw_alloc_real(n)), out_(fftw_alloc_complex(n / 2 + 1)), plan_(real_plan(n)) {
  if (!in_ || !out_) throw std::bad_alloc();
}

RealForward::~RealForward() {
  fftw_free(in_);
  fftw_free(out_);
}

void RealForward::execute() { fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_), in_, out_); }

ComplexForward::ComplexForward(std::size_t n)
    : n_(n), in_(fftw_alloc_complex(n)), out_(fftw_alloc_complex(n)), plan_(complex_plan(n)) {
  if (!in_ || !out_) throw std::bad_alloc();
}

ComplexForward::~ComplexForward() {
  fftw_free(in_);
  fftw_free(out_);
}

void ComplexForward::execute() { fftw_execute_dft(static_cast<fftw_plan>(plan_), in_, out_); }

}  // namespace qcs::fft
