#pragma once

// Shared helpers for the unit and acceptance tests: seeded random fields and
// a brute-force Fourier-space evaluation of the dealiased nonlinear term.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ndas/field.hpp"
#include "ndas/spectral_ops.hpp"

namespace ndas::testing {

/// Random real field: white noise in physical space, transformed, low-passed
/// to |k_int| <= k_max, optionally Leray-projected and dealiased.
inline SpectralField random_field(const GridPtr& grid, std::uint64_t seed, double k_max = 1e9,
                                  bool solenoidal = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PhysicalField phys{grid, {}};
  for (int c = 0; c < grid->dim(); ++c) {
    RealArray samples(grid->physical_size());
    for (auto& s : samples) s = normal(rng);
    phys.components.push_back(std::move(samples));
  }
  SpectralField field = from_physical(phys);
  const double cut = k_max * k_max;
  for_each_mode(*grid, [&](const Mode& m) {
    if (static_cast<double>(m.k_sq) > cut)
      for (int c = 0; c < grid->dim(); ++c) field.component(c)[m.index] = Complex{};
  });
  if (solenoidal) {
    field = dealias(leray_project(field));
  }
  const double scale = 1.0 / std::sqrt(l2_norm_sq(field));
  field *= scale;
  return field;
}

/// Single-frequency real field: coefficient `amp` (per component) at integer
/// frequency k (last entry >= 0). On the k_last = 0 plane the partner -k is
/// stored explicitly and receives the conjugate.
inline SpectralField single_mode(const GridPtr& grid, std::array<int, 3> k, std::array<Complex, 3> amp) {
  SpectralField field(grid);
  const int d = grid->dim();
  std::array<int, 3> partner{0, 0, 0};
  for (int a = 0; a < d; ++a) partner[a] = grid->is_nyquist(k[a]) ? k[a] : -k[a];
  for_each_mode(*grid, [&](const Mode& m) {
    if (m.k == k)
      for (int c = 0; c < d; ++c) field.component(c)[m.index] = amp[c];
    else if (k[d - 1] == 0 && m.k == partner)
      for (int c = 0; c < d; ++c) field.component(c)[m.index] = std::conj(amp[c]);
  });
  field.set_solenoidal(false);
  return field;
}

/// Coefficient at an arbitrary integer frequency, recovered from the half
/// layout through conjugate symmetry.
inline Complex full_coefficient(const SpectralField& f, int comp, std::array<int, 3> k) {
  const Grid& g = f.grid();
  const int n = g.n();
  const int d = g.dim();
  bool conj = false;
  if (k[d - 1] < 0) {
    for (int a = 0; a < d; ++a) k[a] = -k[a];
    conj = true;
  }
  std::size_t index = 0;
  for (int a = 0; a < d; ++a) {
    const int i = k[a] >= 0 ? k[a] : k[a] + n;
    index = index * static_cast<std::size_t>(g.extent(a)) + static_cast<std::size_t>(i);
  }
  const Complex c = f.component(comp)[index];
  return conj ? std::conj(c) : c;
}

/// Direct modular convolution: for every stored output frequency k,
/// sum_{p + q = k (mod n)} sum_j u_j(p) (i q_j) u_i(q), then two-thirds
/// truncation, zero mean and Leray projection. The DFT of a pointwise product
/// on the grid is exactly this aliased convolution divided by n^dim.
inline SpectralField convolution_oracle(const SpectralField& u) {
  const Grid& g = u.grid();
  const int n = g.n();
  const int d = g.dim();
  const double ku = g.k_unit();
  std::vector<std::array<int, 3>> freqs;
  std::array<int, 3> k{0, 0, 0};
  const auto wrap = [n](int f) { return ((f % n) + n) % n <= n / 2 ? ((f % n) + n) % n : ((f % n) + n) % n - n; };
  for (int a = -n / 2 + 1; a < n / 2; ++a)
    for (int b = -n / 2 + 1; b < n / 2; ++b)
      for (int c = (d == 3 ? -n / 2 + 1 : 0); c < (d == 3 ? n / 2 : 1); ++c) {
        k = {a, b, c};
        freqs.push_back(k);
      }
  SpectralField out(u.grid_ptr());
  const double norm = static_cast<double>(g.physical_size());
  for_each_mode(g, [&](const Mode& m) {
    for (int a = 0; a < d; ++a)
      if (g.is_nyquist(m.k[a])) return;
    for (int i = 0; i < d; ++i) {
      Complex acc{};
      for (const auto& p : freqs) {
        std::array<int, 3> q{0, 0, 0};
        bool nyquist = false;
        for (int a = 0; a < d; ++a) {
          q[a] = wrap(m.k[a] - p[a]);
          if (g.is_nyquist(q[a])) nyquist = true;
        }
        if (nyquist) continue;
        const Complex ui_q = full_coefficient(u, i, q);
        Complex adv{};
        for (int j = 0; j < d; ++j) adv += full_coefficient(u, j, p) * Complex{0.0, ku * q[j]};
        acc += adv * ui_q;
      }
      out.component(i)[m.index] = acc / norm;
    }
  });
  dealias_in_place(out);
  for (int c = 0; c < d; ++c) out.component(c)[0] = Complex{};
  return leray_project(out);
}

inline double relative_difference(const SpectralField& a, const SpectralField& b) {
  return std::sqrt(l2_norm_sq(a - b) / std::max(l2_norm_sq(b), 1e-300));
}

}  // namespace ndas::testing
