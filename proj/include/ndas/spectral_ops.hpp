#pragma once

#include <cstddef>
#include <vector>

#include "ndas/field.hpp"

namespace ndas {

/// Orthogonal projection onto divergence-free, zero-mean fields:
/// u(k) -> u(k) - k (k.u(k)) / |k|^2, with u(0) = 0. Idempotent.
SpectralField leray_project(const SpectralField& field);

/// Stokes operator A = -Laplacian on zero-mean fields: u(k) -> |k|^2 u(k).
SpectralField apply_stokes(const SpectralField& field);

/// Two-thirds rule truncation: zero every coefficient with any |k_i| > n/3.
SpectralField dealias(const SpectralField& field);
void dealias_in_place(SpectralField& field);
bool is_dealiased(const SpectralField& field);

/// B(u,u) = P_sigma[(u.grad)u], convective form, evaluated pseudospectrally:
/// derivatives in Fourier space, products on the grid, two-thirds truncation,
/// then Leray projection.
SpectralField nonlinear_term(const SpectralField& u);

/// P_m: keep coefficients with |k|^2 <= lambda_of(m). m = 0 gives zero.
SpectralField project_low_modes(const SpectralField& field, std::size_t m);
/// Q_m = I - P_m.
SpectralField project_high_modes(const SpectralField& field, std::size_t m);

struct Norms {
  double l2 = 0.0;
  double h1 = 0.0;
  double l2_of_laplacian = 0.0;
};

/// Continuous-domain norms via Parseval. With the unscaled forward
/// transform, ||u||_{L2}^2 = L^dim / n^(2 dim) * sum_k |u(k)|^2 over the full
/// spectrum, and the H1 / Laplacian norms carry |k|^2 / |k|^4 weights.
Norms norms(const SpectralField& field);
double l2_norm_sq(const SpectralField& field);
double h1_norm_sq(const SpectralField& field);
/// Parseval factor L^dim / n^(2 dim).
double parseval_scale(const Grid& grid);

/// L2 inner product (real part) of two fields on the same grid.
double inner_product(const SpectralField& a, const SpectralField& b);

/// Shell energies: E[s] = 1/2 sum over modes with s - 1/2 < |k_int| <= s + 1/2
/// of |u(k)|^2 (Parseval-scaled). sum_s E[s] = 1/2 ||u||^2.
std::vector<double> energy_spectrum(const SpectralField& field);
/// Shell index used by energy_spectrum for an integer |k|^2.
std::size_t shell_of(std::int64_t k_sq);

/// max_k |k . u(k)| with scaled wavenumbers.
double max_divergence(const SpectralField& field);
double max_abs_coefficient(const SpectralField& field);

/// Spectral derivative of one component along `axis` (Nyquist excluded).
ComplexArray derivative(const SpectralField& field, int component, int axis);

}  // namespace ndas
