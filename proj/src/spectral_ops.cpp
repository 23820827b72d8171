#include "ndas/spectral_ops.hpp"

#include <algorithm>
#include <cmath>

#include "ndas/fft.hpp"
#include "ndas/parallel.hpp"

namespace ndas {

namespace {

bool retained(const Grid& g, const Mode& m) {
  for (int a = 0; a < g.dim(); ++a)
    if (!g.is_retained(m.k[a])) return false;
  return true;
}

// Sum over all stored modes of weight * term(mode), reduced row by row.
template <class F>
double weighted_sum(const Grid& g, F&& term) {
  return parallel_row_sum(g.n(), [&](int row) {
    double acc = 0.0;
    for_each_mode_in_row(g, row, [&](const Mode& m) { acc += m.weight * term(m); });
    return acc;
  });
}

template <class F>
void for_each_mode_parallel(const Grid& g, F&& f) {
  parallel_rows(g.n(), [&](int row) { for_each_mode_in_row(g, row, f); });
}

}  // namespace

double parseval_scale(const Grid& g) {
  const double n_d = static_cast<double>(g.physical_size());
  return std::pow(g.length(), g.dim()) / (n_d * n_d);
}

SpectralField leray_project(const SpectralField& field) {
  SpectralField out = field;
  const Grid& g = field.grid();
  const int d = field.components();
  for_each_mode_parallel(g, [&](const Mode& m) {
    if (m.k_sq == 0) {
      for (int c = 0; c < d; ++c) out.component(c)[m.index] = Complex{};
      return;
    }
    // Projection is scale invariant in k; integer frequencies suffice.
    Complex dot{};
    for (int c = 0; c < d; ++c) dot += static_cast<double>(m.k[c]) * field.component(c)[m.index];
    const Complex factor = dot / static_cast<double>(m.k_sq);
    for (int c = 0; c < d; ++c) out.component(c)[m.index] -= static_cast<double>(m.k[c]) * factor;
  });
  out.set_solenoidal(true);
  return out;
}

SpectralField apply_stokes(const SpectralField& field) {
  SpectralField out = field;
  const Grid& g = field.grid();
  const double l1 = g.lambda1();
  for_each_mode_parallel(g, [&](const Mode& m) {
    const double k2 = l1 * static_cast<double>(m.k_sq);
    for (int c = 0; c < field.components(); ++c) out.component(c)[m.index] *= k2;
  });
  return out;
}

void dealias_in_place(SpectralField& field) {
  const Grid& g = field.grid();
  for_each_mode_parallel(g, [&](const Mode& m) {
    if (!retained(g, m)) {
      for (int c = 0; c < field.components(); ++c) field.component(c)[m.index] = Complex{};
    }
  });
}

SpectralField dealias(const SpectralField& field) {
  SpectralField out = field;
  dealias_in_place(out);
  return out;
}

bool is_dealiased(const SpectralField& field) {
  const Grid& g = field.grid();
  bool ok = true;
  for_each_mode(g, [&](const Mode& m) {
    if (retained(g, m)) return;
    for (int c = 0; c < field.components(); ++c)
      if (field.component(c)[m.index] != Complex{}) ok = false;
  });
  return ok;
}

ComplexArray derivative(const SpectralField& field, int component, int axis) {
  const Grid& g = field.grid();
  ComplexArray out(g.spectral_size());
  auto src = field.component(component);
  const double ku = g.k_unit();
  for_each_mode_parallel(g, [&](const Mode& m) {
    const int k = m.k[axis];
    const double factor = g.is_nyquist(k) ? 0.0 : ku * k;
    const Complex s = src[m.index];
    out[m.index] = Complex{-factor * s.imag(), factor * s.real()};
  });
  return out;
}

SpectralField nonlinear_term(const SpectralField& u) {
  const Grid& g = u.grid();
  const int d = u.components();
  auto fft = Fft::for_grid(g);
  const std::size_t np = g.physical_size();

  std::vector<RealArray> velocity(static_cast<std::size_t>(d), RealArray(np));
  for (int j = 0; j < d; ++j) fft->inverse(u.component(j), velocity[static_cast<std::size_t>(j)]);

  SpectralField out(u.grid_ptr());
  RealArray gradient(np);
  RealArray product(np);
  for (int i = 0; i < d; ++i) {
    std::fill(product.begin(), product.end(), 0.0);
    for (int j = 0; j < d; ++j) {
      fft->inverse(derivative(u, i, j), gradient);
      const auto& uj = velocity[static_cast<std::size_t>(j)];
      parallel_rows(g.n(), [&](int row) {
        const std::size_t stride = np / static_cast<std::size_t>(g.n());
        const std::size_t begin = stride * static_cast<std::size_t>(row);
        for (std::size_t p = begin; p < begin + stride; ++p) product[p] += uj[p] * gradient[p];
      });
    }
    fft->forward(product, out.component(i));
  }
  dealias_in_place(out);
  for (int c = 0; c < d; ++c) out.component(c)[0] = Complex{};
  return leray_project(out);
}

SpectralField project_low_modes(const SpectralField& field, std::size_t m) {
  SpectralField out = field;
  const Grid& g = field.grid();
  const std::int64_t cutoff = g.shell_sq(m);
  for_each_mode_parallel(g, [&](const Mode& mode) {
    if (mode.k_sq > cutoff || mode.k_sq == 0) {
      for (int c = 0; c < field.components(); ++c) out.component(c)[mode.index] = Complex{};
    }
  });
  return out;
}

SpectralField project_high_modes(const SpectralField& field, std::size_t m) {
  SpectralField out = field;
  const Grid& g = field.grid();
  const std::int64_t cutoff = g.shell_sq(m);
  for_each_mode_parallel(g, [&](const Mode& mode) {
    if (mode.k_sq <= cutoff) {
      for (int c = 0; c < field.components(); ++c) out.component(c)[mode.index] = Complex{};
    }
  });
  return out;
}

Norms norms(const SpectralField& field) {
  const Grid& g = field.grid();
  const double scale = parseval_scale(g);
  const double l1 = g.lambda1();
  const int d = field.components();
  std::vector<double> l2(static_cast<std::size_t>(g.n())), h1(l2.size()), lap(l2.size());
  parallel_rows(g.n(), [&](int row) {
    double a = 0.0, b = 0.0, c = 0.0;
    for_each_mode_in_row(g, row, [&](const Mode& m) {
      double mag = 0.0;
      for (int comp = 0; comp < d; ++comp) mag += std::norm(field.component(comp)[m.index]);
      const double k2 = l1 * static_cast<double>(m.k_sq);
      a += m.weight * mag;
      b += m.weight * k2 * mag;
      c += m.weight * k2 * k2 * mag;
    });
    const auto r = static_cast<std::size_t>(row);
    l2[r] = a;
    h1[r] = b;
    lap[r] = c;
  });
  Norms out;
  double a = 0.0, b = 0.0, c = 0.0;
  for (std::size_t r = 0; r < l2.size(); ++r) {
    a += l2[r];
    b += h1[r];
    c += lap[r];
  }
  out.l2 = std::sqrt(scale * a);
  out.h1 = std::sqrt(scale * b);
  out.l2_of_laplacian = std::sqrt(scale * c);
  return out;
}

double l2_norm_sq(const SpectralField& field) {
  const int d = field.components();
  return parseval_scale(field.grid()) * weighted_sum(field.grid(), [&](const Mode& m) {
           double mag = 0.0;
           for (int c = 0; c < d; ++c) mag += std::norm(field.component(c)[m.index]);
           return mag;
         });
}

double h1_norm_sq(const SpectralField& field) {
  const int d = field.components();
  const double l1 = field.grid().lambda1();
  return parseval_scale(field.grid()) * weighted_sum(field.grid(), [&](const Mode& m) {
           double mag = 0.0;
           for (int c = 0; c < d; ++c) mag += std::norm(field.component(c)[m.index]);
           return l1 * static_cast<double>(m.k_sq) * mag;
         });
}

double inner_product(const SpectralField& a, const SpectralField& b) {
  const int d = a.components();
  return parseval_scale(a.grid()) * weighted_sum(a.grid(), [&](const Mode& m) {
           double acc = 0.0;
           for (int c = 0; c < d; ++c) {
             acc += (std::conj(a.component(c)[m.index]) * b.component(c)[m.index]).real();
           }
           return acc;
         });
}

std::size_t shell_of(std::int64_t k_sq) {
  // s - 1/2 < |k| <= s + 1/2; |k|^2 is an integer so |k| never sits on a
  // half-integer boundary.
  return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(k_sq)) + 0.5));
}

std::vector<double> energy_spectrum(const SpectralField& field) {
  const Grid& g = field.grid();
  const int d = field.components();
  const double scale = parseval_scale(g);
  const std::int64_t half = g.n() / 2;
  std::vector<double> spectrum(shell_of(g.dim() * half * half) + 1, 0.0);
  for_each_mode(g, [&](const Mode& m) {
    double mag = 0.0;
    for (int c = 0; c < d; ++c) mag += std::norm(field.component(c)[m.index]);
    spectrum[shell_of(m.k_sq)] += 0.5 * scale * m.weight * mag;
  });
  return spectrum;
}

double max_divergence(const SpectralField& field) {
  const Grid& g = field.grid();
  const double ku = g.k_unit();
  double worst = 0.0;
  for_each_mode(g, [&](const Mode& m) {
    Complex div{};
    for (int c = 0; c < field.components(); ++c) div += ku * m.k[c] * field.component(c)[m.index];
    worst = std::max(worst, std::abs(div));
  });
  return worst;
}

double max_abs_coefficient(const SpectralField& field) {
  double worst = 0.0;
  for (const auto& c : field.data()) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace ndas
