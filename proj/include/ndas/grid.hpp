#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace ndas {

/// Periodic box [0, L)^dim sampled on n points per axis.
///
/// Spectral data uses the real-to-complex half layout: every axis has n
/// entries in standard DFT order except the last, which stores only the
/// non-negative frequencies 0..n/2. Wavenumbers are integer frequencies
/// scaled by 2*pi/L.
class Grid {
 public:
  Grid(int dim, int n, double length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }

  /// 2*pi/L, the factor turning integer frequencies into wavenumbers.
  double k_unit() const { return k_unit_; }
  /// Smallest positive Stokes eigenvalue, (2*pi/L)^2.
  double lambda1() const { return k_unit_ * k_unit_; }

  /// Integer frequency stored at index i along a full axis. The Nyquist
  /// index n/2 maps to +n/2.
  int freq(int i) const { return i <= n_ / 2 ? i : i - n_; }
  /// Scaled wavenumbers along a full axis, DFT order.
  std::vector<double> wavenumbers() const;

  int extent(int axis) const { return axis == dim_ - 1 ? n_ / 2 + 1 : n_; }
  std::size_t spectral_size() const { return spectral_size_; }
  std::size_t physical_size() const { return physical_size_; }

  bool is_nyquist(int k) const { return k == n_ / 2 || k == -n_ / 2; }
  /// Two-thirds rule: a frequency survives dealiasing iff |k| <= n/3.
  bool is_retained(int k) const { return 3 * (k < 0 ? -k : k) <= n_; }

  /// Number of distinct positive values of |k_int|^2 among represented
  /// (non-Nyquist) modes.
  std::size_t shell_count() const { return shells_.size(); }
  /// |k_int|^2 of the m-th distinct shell (1-based); 0 for m = 0.
  std::int64_t shell_sq(std::size_t m) const;
  /// m-th Stokes eigenvalue counted by distinct value: (2*pi/L)^2 * shell_sq(m).
  /// Infinite once m runs past the represented shells.
  double lambda_of(std::size_t m) const;
  /// Largest m whose shell radius |k_int| does not exceed `radius`.
  std::size_t modes_within_radius(double radius) const;

 private:
  int dim_;
  int n_;
  double length_;
  double k_unit_;
  std::size_t spectral_size_;
  std::size_t physical_size_;
  std::vector<std::int64_t> shells_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validating factory: dim in {2,3}, n even and >= 4, L > 0.
GridPtr build_grid(int dim, int n, double length = 1.0);

/// One stored spectral coefficient: flat index, integer frequency vector
/// (unused axes zero), |k_int|^2 and its Parseval weight in the half layout.
struct Mode {
  std::size_t index;
  std::array<int, 3> k;
  std::int64_t k_sq;
  double weight;
};

/// Visit the stored coefficients whose first-axis index is `i`, in storage
/// order. Rows are independent, so callers may split them across threads.
template <class F>
void for_each_mode_in_row(const Grid& g, int i, F&& f) {
  const int n = g.n();
  const int half = n / 2 + 1;
  const int kx = g.freq(i);
  Mode m{g.spectral_size() / n * std::size_t(i), {kx, 0, 0}, 0, 1.0};
  if (g.dim() == 2) {
    for (int j = 0; j < half; ++j) {
      m.k[1] = j;
      m.k_sq = std::int64_t(kx) * kx + std::int64_t(j) * j;
      m.weight = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      f(static_cast<const Mode&>(m));
      ++m.index;
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const int ky = g.freq(j);
      m.k[1] = ky;
      for (int l = 0; l < half; ++l) {
        m.k[2] = l;
        m.k_sq = std::int64_t(kx) * kx + std::int64_t(ky) * ky + std::int64_t(l) * l;
        m.weight = (l == 0 || l == n / 2) ? 1.0 : 2.0;
        f(static_cast<const Mode&>(m));
        ++m.index;
      }
    }
  }
}

/// Visit every stored coefficient in storage order.
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  for (int i = 0; i < g.n(); ++i) for_each_mode_in_row(g, i, f);
}

}  // namespace ndas
