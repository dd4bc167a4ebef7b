#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace qcs::fft {

/// Forward real-input DFT of length n: out[k] = Σ_j in[j] e^{-2πijk/n} for
/// k = 0..n/2. Buffers are owned by the instance; plans are shared and built
/// deterministically (estimate mode), so results do not depend on timing.
class RealForward {
 public:
  explicit RealForward(std::size_t n);
  ~RealForward();
  RealForward(const RealForward&) = delete;
  RealForward& operator=(const RealForward&) = delete;

  std::size_t size() const { return n_; }
  double* input() { return in_; }
  const std::complex<double>* output() const { return reinterpret_cast<const std::complex<double>*>(out_); }
  void execute();

 private:
  std::size_t n_;
  double* in_;
  double (*out_)[2];
  void* plan_;
};

/// Forward complex DFT of length n: out[k] = Σ_j in[j] e^{-2πijk/n}.
class ComplexForward {
 public:
  explicit ComplexForward(std::size_t n);
  ~ComplexForward();
  ComplexForward(const ComplexForward&) = delete;
  ComplexForward& operator=(const ComplexForward&) = delete;

  std::size_t size() const { return n_; }
  std::complex<double>* input() { return reinterpret_cast<std::complex<double>*>(in_); }
  const std::complex<double>* output() const { return reinterpret_cast<const std::complex<double>*>(out_); }
  void execute();

 private:
  std::size_t n_;
  double (*in_)[2];
  double (*out_)[2];
  void* plan_;
};

}  // namespace qcs::fft
