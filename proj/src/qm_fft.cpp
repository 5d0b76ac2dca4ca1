#include "ionshuttle/qm/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace ionshuttle::qm {

namespace {
// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t n0, std::size_t n1) {
  size_ = (n1 > 0) ? n0 * n1 : n0;
  if (size_ == 0) throw std::invalid_argument("Fft: empty transform");
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* buf = fftw_alloc_complex(size_);
  if (!buf) throw std::bad_alloc();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (n1 > 0) {
    plan_fwd_ = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1),
                                 buf, buf, FFTW_FORWARD, flags);
    plan_bwd_ = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1),
                                 buf, buf, FFTW_BACKWARD, flags);
  } else {
    plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n0), buf, buf, FFTW_FORWARD,
                                 flags);
    plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(n0), buf, buf, FFTW_BACKWARD,
                                 flags);
  }
  fftw_free(buf);
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("Fft: planning failed");
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Fft::forward(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                   reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
}

void Fft::inverse(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                   reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) data[i] *= scale;
}

}  // namespace ionshuttle::qm
