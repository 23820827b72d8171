#include "ndas/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ndas/fft.hpp"

namespace ndas {

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)),
      coeffs_(grid_->spectral_size() * static_cast<std::size_t>(grid_->dim())) {}

std::span<Complex> SpectralField::component(int c) {
  return std::span<Complex>(coeffs_).subspan(static_cast<std::size_t>(c) * component_size(),
                                             component_size());
}

std::span<const Complex> SpectralField::component(int c) const {
  return std::span<const Complex>(coeffs_).subspan(static_cast<std::size_t>(c) * component_size(),
                                                   component_size());
}

bool SpectralField::same_grid(const SpectralField& other) const {
  if (grid_ == other.grid_) return true;
  if (!grid_ || !other.grid_) return false;
  return grid_->dim() == other.grid_->dim() && grid_->n() == other.grid_->n() &&
         grid_->length() == other.grid_->length();
}

namespace {
void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!a.same_grid(b)) throw std::invalid_argument("spectral fields live on different grids");
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  solenoidal_ = solenoidal_ && other.solenoidal_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  solenoidal_ = solenoidal_ && other.solenoidal_;
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralField& SpectralField::add_scaled(double scale, const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += scale * other.coeffs_[i];
  solenoidal_ = solenoidal_ && other.solenoidal_;
  return *this;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

bool operator==(const SpectralField& a, const SpectralField& b) {
  return a.same_grid(b) && a.coeffs_ == b.coeffs_;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

PhysicalField to_physical(const SpectralField& field) {
  const auto& grid = field.grid();
  auto fft = Fft::for_grid(grid);
  PhysicalField out{field.grid_ptr(), {}};
  out.components.resize(static_cast<std::size_t>(field.components()));
  for (int c = 0; c < field.components(); ++c) {
    auto& comp = out.components[static_cast<std::size_t>(c)];
    comp.resize(grid.physical_size());
    fft->inverse(field.component(c), comp);
  }
  return out;
}

SpectralField from_physical(const PhysicalField& field) {
  SpectralField out(field.grid);
  auto fft = Fft::for_grid(*field.grid);
  for (int c = 0; c < out.components(); ++c) {
    auto comp = out.component(c);
    fft->forward(field.components[static_cast<std::size_t>(c)], comp);
    comp[0] = Complex{};
  }
  out.set_solenoidal(false);
  return out;
}

}  // namespace ndas
