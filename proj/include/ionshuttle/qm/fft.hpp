#pragma once

#include <complex>
#include <cstddef>

namespace ionshuttle::qm {

/// Thin FFTW wrapper, one instance per propagation (plans are not shared
/// across threads; creation is serialized internally). forward() applies
/// exp(-ikx) summation, inverse() includes the 1/N normalization.
class Fft {
 public:
  /// 1D transform of length n, or 2D row-major (n0 x n1) when n1 > 0.
  explicit Fft(std::size_t n0, std::size_t n1 = 0);
  ~Fft();

  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(std::complex<double>* data) const;
  void inverse(std::complex<double>* data) const;

  std::size_t size() const { return size_; }

 private:
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  std::size_t size_ = 0;
};

}  // namespace ionshuttle::qm
