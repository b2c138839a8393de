#include "uavmag/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace uavmag::fft {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

// FFTW buffer owned for the duration of one transform.
struct Buffer {
  explicit Buffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (!data) throw std::bad_alloc();
  }
  ~Buffer() { fftw_free(data); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* data;
};

fftw_plan plan_for(std::size_t n, int sign) {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  auto it = c.plans.find({n, sign});
  if (it != c.plans.end()) return it->second;
  Buffer in(n);
  Buffer out(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, sign, FFTW_ESTIMATE);
  if (!p) throw std::runtime_error("fftw: planning failed");
  c.plans.emplace(std::make_pair(n, sign), p);
  return p;
}

void run(std::span<std::complex<double>> data, int sign) {
  const std::size_t n = data.size();
  if (n == 0) return;
  fftw_plan p = plan_for(n, sign);
  // Aligned scratch keeps FFTW on the same codelets regardless of the
  // caller's allocation, so results do not depend on which thread runs them.
  Buffer in(n);
  Buffer out(n);
  std::memcpy(in.data, data.data(), n * sizeof(fftw_complex));
  fftw_execute_dft(p, in.data, out.data);
  std::memcpy(static_cast<void*>(data.data()), out.data, n * sizeof(fftw_complex));
}

}  // namespace

void forward(std::span<std::complex<double>> data) { run(data, FFTW_FORWARD); }

void inverse(std::span<std::complex<double>> data) { run(data, FFTW_BACKWARD); }

std::size_t good_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (const std::size_t f : {2U, 3U, 5U})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

}  // namespace uavmag::fft
