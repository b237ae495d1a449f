#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <tuple>

namespace fpm::detail {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (dim, n, sign) and kept for the
// process lifetime. FFTW_ESTIMATE | FFTW_UNALIGNED keeps the selected
// algorithm independent of buffer addresses, which keeps results bitwise
// reproducible from run to run.
class PlanCache {
 public:
  static fftw_plan get(int dim, int n, int sign) {
    static PlanCache cache;
    std::lock_guard lock(cache.mutex_);
    auto key = std::make_tuple(dim, n, sign);
    if (auto it = cache.plans_.find(key); it != cache.plans_.end()) return it->second.get();

    const std::size_t total = dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n);
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    if (!scratch) throw std::bad_alloc();
    int dims[2] = {n, n};
    fftw_plan p = fftw_plan_dft(dim, dims, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!p) throw std::runtime_error("FFTW planning failed");
    auto [it, _] = cache.plans_.emplace(key, PlanPtr(p));
    return it->second.get();
  }

 private:
  struct PlanDeleter {
    void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
  };
  using PlanPtr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, PlanPtr> plans_;
};

/// In-place unnormalized DFT with kernel exp(sign * i k.x).
inline void dft_inplace(std::span<std::complex<double>> data, int dim, int n, int sign) {
  fftw_plan p = PlanCache::get(dim, n, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, ptr, ptr);
}

}  // namespace fpm::detail
