#include "ndas/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ndas/errors.hpp"

namespace ndas {

namespace {

std::vector<std::int64_t> distinct_shells(int dim, int n) {
  // Non-Nyquist frequencies run over |k_i| <= n/2 - 1. Enumerate sorted
  // magnitude tuples only; a bitmap collects the attainable sums.
  const std::int64_t kmax = n / 2 - 1;
  const std::int64_t top = dim * kmax * kmax;
  std::vector<char> seen(static_cast<std::size_t>(top + 1), 0);
  if (dim == 2) {
    for (std::int64_t a = 0; a <= kmax; ++a)
      for (std::int64_t b = a; b <= kmax; ++b) seen[static_cast<std::size_t>(a * a + b * b)] = 1;
  } else {
    for (std::int64_t a = 0; a <= kmax; ++a)
      for (std::int64_t b = a; b <= kmax; ++b)
        for (std::int64_t c = b; c <= kmax; ++c)
          seen[static_cast<std::size_t>(a * a + b * b + c * c)] = 1;
  }
  std::vector<std::int64_t> values;
  for (std::int64_t s = 1; s <= top; ++s)
    if (seen[static_cast<std::size_t>(s)]) values.push_back(s);
  return values;
}

}  // namespace

Grid::Grid(int dim, int n, double length)
    : dim_(dim), n_(n), length_(length), k_unit_(2.0 * std::numbers::pi / length) {
  if (dim != 2 && dim != 3) {
    throw ConfigError("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (n < 4 || n % 2 != 0) {
    throw ConfigError("grid size must be even and >= 4, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ConfigError("box length must be positive and finite");
  }
  physical_size_ = 1;
  spectral_size_ = 1;
  for (int a = 0; a < dim; ++a) {
    physical_size_ *= static_cast<std::size_t>(n);
    spectral_size_ *= static_cast<std::size_t>(extent(a));
  }
  shells_ = distinct_shells(dim, n);
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) k[static_cast<std::size_t>(i)] = freq(i) * k_unit_;
  return k;
}


std::int64_t Grid::shell_sq(std::size_t m) const {
  if (m == 0) return 0;
  const auto& s = shells_;
  if (m > s.size()) return std::numeric_limits<std::int64_t>::max();
  return s[m - 1];
}

double Grid::lambda_of(std::size_t m) const {
  if (m == 0) return 0.0;
  if (m > shells_.size()) return std::numeric_limits<double>::infinity();
  return lambda1() * static_cast<double>(shell_sq(m));
}

std::size_t Grid::modes_within_radius(double radius) const {
  const auto& s = shells_;
  const double r2 = radius * radius;
  auto it = std::upper_bound(s.begin(), s.end(), r2,
                             [](double v, std::int64_t e) { return v < static_cast<double>(e); });
  return static_cast<std::size_t>(it - s.begin());
}

GridPtr build_grid(int dim, int n, double length) {
  return std::make_shared<const Grid>(dim, n, length);
}

}  // namespace ndas
