#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ndas/dynamics.hpp"
#include "ndas/errors.hpp"
#include "ndas/spectral_ops.hpp"
#include "support.hpp"

using namespace ndas;
using namespace ndas::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

SolverParams unforced(double nu) {
  SolverParams p;
  p.nu = nu;
  p.forcing = ForcingKind::none;
  return p;
}

// Midpoint-rule reference for the Taylor-Green L2 norm, independent of the
// spectral path: average f.f over a fine uniform grid (exact for trig
// polynomials of low degree).
double taylor_green_norm_sq_quadrature(int dim) {
  const int q = 24;
  double acc = 0.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int l = 0; l < (dim == 3 ? q : 1); ++l) {
        const double x = (i + 0.5) / q, y = (j + 0.5) / q, z = (l + 0.5) / q;
        const double cz = dim == 3 ? std::cos(2 * pi * z) : 1.0;
        const double f0 = std::sin(2 * pi * x) * std::cos(2 * pi * y) * cz;
        const double f1 = -std::cos(2 * pi * x) * std::sin(2 * pi * y) * cz;
        acc += f0 * f0 + f1 * f1;
      }
  return acc / std::pow(q, dim);
}

}  // namespace

TEST_CASE("taylor green forcing", "[forcing]") {
  auto g3 = build_grid(3, 8);
  auto f3 = taylor_green_forcing(g3);
  CHECK(f3.is_solenoidal());
  CHECK(max_divergence(f3) <= 1e-13);
  CHECK(f3.component(0)[0] == Complex{});
  CHECK_THAT(l2_norm_sq(f3), WithinRel(0.25, 1e-14));
  CHECK_THAT(taylor_green_norm_sq_quadrature(3), WithinRel(0.25, 1e-13));

  auto g2 = build_grid(2, 16);
  auto f2 = taylor_green_forcing(g2);
  CHECK(max_divergence(f2) <= 1e-13);
  CHECK_THAT(l2_norm_sq(f2), WithinRel(0.5, 1e-14));
  CHECK_THAT(taylor_green_norm_sq_quadrature(2), WithinRel(0.5, 1e-13));

  // Coefficients agree with a transform of the sampled formula.
  for (const auto& g : {g2, g3}) {
    PhysicalField phys{g, {}};
    for (int c = 0; c < g->dim(); ++c) phys.components.emplace_back(g->physical_size(), 0.0);
    const int n = g->n();
    std::size_t p = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < (g->dim() == 3 ? n : 1); ++l, ++p) {
          const double x = 2 * pi * i / n, y = 2 * pi * j / n, z = 2 * pi * l / n;
          const double cz = g->dim() == 3 ? std::cos(z) : 1.0;
          phys.components[0][p] = std::sin(x) * std::cos(y) * cz;
          phys.components[1][p] = -std::cos(x) * std::sin(y) * cz;
        }
    const auto f = taylor_green_forcing(g);
    CHECK(relative_difference(from_physical(phys), f) <= 1e-14);
  }
}

TEST_CASE("solver parameter validation", "[params]") {
  SolverParams p;
  p.nu = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.nu = 1.0;
  p.cfl_number = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.cfl_number = 0.5;
  p.dt_fixed = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_THROWS_AS(parse_forcing("kolmogorov"), ConfigError);
}

TEST_CASE("rhs examples", "[rhs]") {
  auto g = build_grid(2, 16);
  Model model(g, unforced(0.3));
  CHECK(max_abs_coefficient(model.rhs(SpectralField(g))) == 0.0);

  // A single Fourier mode has no dealiased self-interaction: B = 0.
  auto u = leray_project(single_mode(g, {1, 2, 0}, {Complex{0.4, 0.1}, Complex{-0.2, 0.3}, {}}));
  auto r = model.rhs(u);
  auto expected = apply_stokes(u);
  expected *= -0.3;
  CHECK(relative_difference(r, expected) <= 1e-14);

  // Frozen feedback with obs == state contributes nothing.
  auto w = random_field(g, 3);
  auto nudge = SpectralField(g);
  CHECK(model.rhs(w, &nudge) == model.rhs(w));
}

TEST_CASE("rk4 exact exponential decay", "[rk4]") {
  // Unit |k| on a 2 pi box keeps the RK4 truncation (|k|^2 dt)^5/120 below
  // roundoff at dt = 1e-3.
  auto g = build_grid(2, 16, 2 * pi);
  Model model(g, unforced(1.0));
  auto u = leray_project(single_mode(g, {1, 0, 0}, {Complex{}, Complex{1.0, 0.0}, {}}));
  const double dt = 1e-3;
  auto next = model.rk4_step(u, 0.0, dt);
  const double ratio = std::sqrt(l2_norm_sq(next) / l2_norm_sq(u));
  CHECK(std::abs(ratio - std::exp(-dt)) <= 1e-12 * std::exp(-dt));
}

TEST_CASE("rk4 convergence order", "[rk4]") {
  auto g = build_grid(2, 16);
  Model model(g, unforced(0.01));
  auto u = leray_project(single_mode(g, {2, 1, 0}, {Complex{1.0, 0.0}, Complex{0.0, 0.0}, {}}));
  const double rate = 0.01 * g->lambda1() * 5;
  const double T = 1.0;
  const double exact = std::sqrt(l2_norm_sq(u)) * std::exp(-rate * T);
  std::vector<double> errors;
  for (double dt : {0.1, 0.05, 0.025}) {
    auto s = u;
    const int steps = static_cast<int>(std::lround(T / dt));
    for (int i = 0; i < steps; ++i) s = model.rk4_step(s, i * dt, dt);
    errors.push_back(std::abs(std::sqrt(l2_norm_sq(s)) - exact));
  }
  const double order1 = std::log2(errors[0] / errors[1]);
  const double order2 = std::log2(errors[1] / errors[2]);
  CHECK(order1 >= 3.8);
  CHECK(order1 <= 4.2);
  CHECK(order2 >= 3.8);
  CHECK(order2 <= 4.2);
}

TEST_CASE("steady stokes balance is a fixed point", "[rk4]") {
  // 2D Taylor-Green: B(u,u) is a gradient, so u = f / (nu |k|^2) is steady.
  auto g = build_grid(2, 32);
  SolverParams p;
  p.nu = 0.7;
  Model model(g, p);
  auto u = model.forcing();
  u *= 1.0 / (p.nu * 2.0 * g->lambda1());
  auto next = model.rk4_step(u, 0.0, 1e-3);
  CHECK(relative_difference(next, u) <= 1e-12);
}

TEST_CASE("rk4 detects blow up", "[rk4]") {
  auto g = build_grid(2, 16);
  Model model(g, unforced(1.0));
  auto u = random_field(g, 4);
  CHECK_THROWS_AS(model.rk4_step(u, 0.0, 1e300), BlowUpError);
}

TEST_CASE("rk4 stage hook sees stage times", "[rk4]") {
  auto g = build_grid(2, 16);
  Model model(g, unforced(0.1));
  std::vector<double> times;
  NudgeHook hook = [&](const SpectralField&, double t) -> std::optional<SpectralField> {
    times.push_back(t);
    return std::nullopt;
  };
  auto u = random_field(g, 5);
  CHECK(model.rk4_step(u, 1.0, 0.1, hook) == model.rk4_step(u, 1.0, 0.1));
  REQUIRE(times.size() == 4);
  CHECK(times[0] == 1.0);
  CHECK_THAT(times[1], WithinAbs(1.05, 1e-15));
  CHECK_THAT(times[3], WithinAbs(1.1, 1e-15));
}

TEST_CASE("cfl time step", "[cfl]") {
  auto g = build_grid(2, 64);
  SolverParams p;
  p.nu = 1.0;
  p.dt_max = 0.25;
  CHECK(cfl_dt(SpectralField(g), p) == 0.25);

  // u = (0, sin 2 pi x) has max |u| = 1 exactly at a grid point.
  PhysicalField phys{g, {RealArray(g->physical_size(), 0.0), RealArray(g->physical_size(), 0.0)}};
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) phys.components[1][i * 64 + j] = std::sin(2 * pi * i / 64.0);
  auto u = from_physical(phys);
  CHECK_THAT(max_velocity(u), WithinRel(1.0, 1e-14));
  CHECK_THAT(cfl_dt(u, p), WithinRel(1.0 / 128.0, 1e-14));
  p.dt_fixed = 1e-4;
  CHECK(cfl_dt(u, p) == 1e-4);

  CHECK_THAT(clip_to_boundary(0.00095, 1e-4, 0.001), WithinRel(5e-5, 1e-9));
  CHECK(clip_to_boundary(0.0, 1e-4, 0.001) == 1e-4);
  CHECK(clip_to_boundary(0.001, 1e-4, 0.001) == 1e-4);
}

TEST_CASE("forced run stays solenoidal", "[rk4]") {
  auto g = build_grid(2, 64);
  SolverParams p;
  p.nu = 5e-3;
  Model model(g, p);
  auto u = random_field(g, 6, 10.0);
  double t = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double dt = 0.5 * cfl_dt(u, p);
    u = model.rk4_step(u, t, dt);
    t += dt;
    CHECK(max_divergence(u) <= 1e-12 * max_abs_coefficient(u));
    CHECK(is_dealiased(u));
  }
}
