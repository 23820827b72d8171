#include "ndas/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "ndas/parallel.hpp"

namespace ndas {

struct Fft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

namespace {

// The FFTW planner is not thread-safe; every planner call goes through here.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_fftw_threads() {
  static bool done = [] {
    fftw_init_threads();
    return true;
  }();
  (void)done;
}

bool aligned_like_plan(const void* p) {
  return reinterpret_cast<std::uintptr_t>(p) % AlignedAllocator<double>::alignment == 0;
}

}  // namespace

Fft::Fft(const Grid& grid)
    : dim_(grid.dim()),
      n_(grid.n()),
      spectral_size_(grid.spectral_size()),
      physical_size_(grid.physical_size()),
      plans_(std::make_unique<Plans>()) {
  RealArray real(physical_size_);
  ComplexArray spec(spectral_size_);
  int dims[3] = {n_, n_, n_};
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  // FFTW_ESTIMATE keeps plan selection deterministic from run to run.
  const unsigned flags = FFTW_ESTIMATE;
  std::lock_guard<std::mutex> lock(planner_mutex());
  init_fftw_threads();
  fftw_plan_with_nthreads(thread_count());
  plans_->forward = fftw_plan_dft_r2c(dim_, dims, real.data(), cplx, flags);
  plans_->inverse = fftw_plan_dft_c2r(dim_, dims, cplx, real.data(), flags);
  if (plans_->forward == nullptr || plans_->inverse == nullptr) {
    throw std::runtime_error("FFTW failed to create plans");
  }
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse) fftw_destroy_plan(plans_->inverse);
}

std::shared_ptr<const Fft> Fft::for_grid(const Grid& grid) {
  using Key = std::tuple<int, int, int>;
  static std::mutex cache_mutex;
  static std::map<Key, std::shared_ptr<const Fft>> cache;
  Key key{grid.dim(), grid.n(), thread_count()};
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto plan = std::make_shared<const Fft>(grid);
  cache.emplace(key, plan);
  return plan;
}

void Fft::forward(std::span<const double> physical, std::span<Complex> spectral) const {
  if (physical.size() != physical_size_ || spectral.size() != spectral_size_) {
    throw std::invalid_argument("Fft::forward: buffer size mismatch");
  }
  // r2c preserves its input for the estimate planner, but the new-array
  // interface takes a non-const pointer and needs plan-compatible alignment.
  thread_local RealArray scratch;
  double* in = const_cast<double*>(physical.data());
  if (!aligned_like_plan(in)) {
    scratch.assign(physical.begin(), physical.end());
    in = scratch.data();
  }
  if (aligned_like_plan(spectral.data())) {
    fftw_execute_dft_r2c(plans_->forward, in, reinterpret_cast<fftw_complex*>(spectral.data()));
  } else {
    thread_local ComplexArray out;
    out.resize(spectral_size_);
    fftw_execute_dft_r2c(plans_->forward, in, reinterpret_cast<fftw_complex*>(out.data()));
    std::copy(out.begin(), out.end(), spectral.begin());
  }
  // Nyquist zeroing on every forward transform.
  const int n = n_;
  const int half = n / 2 + 1;
  const std::size_t plane = spectral_size_ / static_cast<std::size_t>(n);
  // first axis Nyquist row
  std::fill_n(spectral.begin() + static_cast<std::ptrdiff_t>(plane * (n / 2)), plane, Complex{});
  if (dim_ == 2) {
    for (int i = 0; i < n; ++i) spectral[static_cast<std::size_t>(i) * half + n / 2] = Complex{};
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t base = (static_cast<std::size_t>(i) * n + j) * half;
        spectral[base + n / 2] = Complex{};
        if (j == n / 2) std::fill_n(spectral.begin() + static_cast<std::ptrdiff_t>(base), half, Complex{});
      }
    }
  }
}

void Fft::inverse(std::span<const Complex> spectral, std::span<double> physical) const {
  if (physical.size() != physical_size_ || spectral.size() != spectral_size_) {
    throw std::invalid_argument("Fft::inverse: buffer size mismatch");
  }
  // Multi-dimensional c2r always overwrites its input.
  thread_local ComplexArray scratch;
  scratch.assign(spectral.begin(), spectral.end());
  if (aligned_like_plan(physical.data())) {
    fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(scratch.data()),
                         physical.data());
  } else {
    thread_local RealArray out;
    out.resize(physical_size_);
    fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(scratch.data()),
                         out.data());
    std::copy(out.begin(), out.end(), physical.begin());
  }
  const double scale = 1.0 / static_cast<double>(physical_size_);
  for (double& v : physical) v *= scale;
}

void zero_nyquist(const Grid& grid, std::span<Complex> spectral) {
  for_each_mode(grid, [&](const Mode& m) {
    for (int a = 0; a < grid.dim(); ++a) {
      if (grid.is_nyquist(m.k[a])) {
        spectral[m.index] = Complex{};
        return;
      }
    }
  });
}

}  // namespace ndas
