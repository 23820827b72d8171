#pragma once

#include <span>
#include <vector>

#include "ndas/aligned.hpp"
#include "ndas/grid.hpp"

namespace ndas {

/// Fourier coefficients of a real, zero-mean velocity field on a periodic
/// box: one component per spatial dimension, each in the Grid's half layout.
///
/// `is_solenoidal` is a bookkeeping flag set by operations that guarantee a
/// divergence-free result (Leray projection and everything built on it).
class SpectralField {
 public:
  SpectralField() = default;
  /// All-zero field (trivially solenoidal).
  explicit SpectralField(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  bool empty() const { return grid_ == nullptr; }
  int components() const { return grid_->dim(); }
  std::size_t component_size() const { return grid_->spectral_size(); }

  std::span<Complex> component(int c);
  std::span<const Complex> component(int c) const;
  std::span<Complex> data() { return coeffs_; }
  std::span<const Complex> data() const { return coeffs_; }

  bool is_solenoidal() const { return solenoidal_; }
  void set_solenoidal(bool flag) { solenoidal_ = flag; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
  /// this += scale * other
  SpectralField& add_scaled(double scale, const SpectralField& other);

  bool same_grid(const SpectralField& other) const;
  bool all_finite() const;

  friend bool operator==(const SpectralField& a, const SpectralField& b);

 private:
  GridPtr grid_;
  ComplexArray coeffs_;
  bool solenoidal_ = true;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Physical-space samples, one RealArray per component, row-major with the
/// last axis fastest.
struct PhysicalField {
  GridPtr grid;
  std::vector<RealArray> components;
};

PhysicalField to_physical(const SpectralField& field);
/// Transforms samples back; the k = 0 coefficient is dropped (zero mean) and
/// Nyquist coefficients are zeroed. The solenoidal flag is left false.
SpectralField from_physical(const PhysicalField& field);

}  // namespace ndas
