#include "fft.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>
#include <stdexcept>

namespace aerodet::detail {
namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

std::vector<std::complex<double>> dft2d(const std::vector<std::complex<double>>& data, int n,
                                        FftDirection direction) {
  const auto count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (n <= 0 || data.size() != count) throw std::invalid_argument("dft2d: size mismatch");

  std::unique_ptr<fftw_complex, FftwFree> buffer(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count)));
  if (!buffer) throw std::bad_alloc();

  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_2d(n, n, buffer.get(), buffer.get(),
                                direction == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE));
  }
  if (!plan) throw std::runtime_error("dft2d: FFTW planning failed");

  for (std::size_t i = 0; i < count; ++i) {
    buffer.get()[i][0] = data[i].real();
    buffer.get()[i][1] = data[i].imag();
  }
  fftw_execute(plan.get());

  std::vector<std::complex<double>> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = {buffer.get()[i][0], buffer.get()[i][1]};
  return out;
}

}  // namespace aerodet::detail
