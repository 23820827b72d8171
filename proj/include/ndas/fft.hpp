#pragma once

#include <memory>
#include <span>

#include "ndas/aligned.hpp"
#include "ndas/grid.hpp"

namespace ndas {

/// Real-to-complex transforms on a Grid, backed by FFTW.
///
/// Convention: forward is unscaled, inverse is scaled by 1/n^dim, so
/// forward(inverse(c)) == c for Hermitian c. Plans are shared per
/// (dim, n, thread count) and are safe to execute concurrently.
class Fft {
 public:
  static std::shared_ptr<const Fft> for_grid(const Grid& grid);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  /// physical (n^dim reals) -> spectral (half layout). Nyquist entries are
  /// zeroed on output.
  void forward(std::span<const double> physical, std::span<Complex> spectral) const;
  /// spectral (half layout) -> physical, scaled by 1/n^dim. Input untouched.
  void inverse(std::span<const Complex> spectral, std::span<double> physical) const;

  struct Plans;
  explicit Fft(const Grid& grid);

 private:
  int dim_;
  int n_;
  std::size_t spectral_size_;
  std::size_t physical_size_;
  std::unique_ptr<Plans> plans_;
};

/// Zero every coefficient with a Nyquist frequency on any axis.
void zero_nyquist(const Grid& grid, std::span<Complex> spectral);

}  // namespace ndas
