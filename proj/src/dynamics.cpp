#include "ndas/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ndas/errors.hpp"
#include "ndas/fft.hpp"
#include "ndas/parallel.hpp"
#include "ndas/spectral_ops.hpp"

namespace ndas {

std::string to_string(ForcingKind kind) {
  return kind == ForcingKind::taylor_green ? "taylor_green" : "none";
}

ForcingKind parse_forcing(const std::string& text) {
  if (text == "taylor_green" || text == "tg") return ForcingKind::taylor_green;
  if (text == "none") return ForcingKind::none;
  throw ConfigError("unknown forcing '" + text + "' (expected taylor_green or none)");
}

void SolverParams::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("nu must be positive");
  if (!(cfl_number > 0.0 && cfl_number <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (dt_fixed && !(*dt_fixed > 0.0 && std::isfinite(*dt_fixed))) throw ConfigError("dt_fixed must be positive");
  if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw ConfigError("dt_max must be positive");
}

SpectralField taylor_green_forcing(const GridPtr& grid) {
  // Exact coefficients of the unscaled transform: each factor sin/cos of a
  // unit frequency splits into two exponentials with weight 1/2, so every
  // nonzero entry sits at |k_a| = 1 with magnitude n^dim / 2^dim.
  const int dim = grid->dim();
  const double amp = static_cast<double>(grid->physical_size()) / (dim == 3 ? 8.0 : 4.0);
  SpectralField f(grid);
  for_each_mode(*grid, [&](const Mode& m) {
    for (int a = 0; a < dim; ++a)
      if (m.k[a] != 1 && m.k[a] != -1) return;
    // sin(x) carries -i sgn(kx) and sin(y) carries -i sgn(ky).
    f.component(0)[m.index] = Complex{0.0, -amp * m.k[0]};
    f.component(1)[m.index] = Complex{0.0, amp * m.k[1]};
  });
  return f;
}

Model::Model(GridPtr grid, SolverParams params)
    : grid_(std::move(grid)), params_(params), forcing_(grid_) {
  params_.validate();
  if (params_.forcing == ForcingKind::taylor_green) forcing_ = taylor_green_forcing(grid_);
}

SpectralField Model::rhs(const SpectralField& state, const SpectralField* nudge) const {
  SpectralField out = nonlinear_term(state);
  const Grid& g = *grid_;
  const double nu_l1 = params_.nu * g.lambda1();
  const auto in = [&](int c) { return state.component(c); };
  parallel_rows(g.n(), [&](int row) {
    for_each_mode_in_row(g, row, [&](const Mode& m) {
      const double damp = nu_l1 * static_cast<double>(m.k_sq);
      for (int c = 0; c < g.dim(); ++c) {
        auto& o = out.component(c)[m.index];
        o = forcing_.component(c)[m.index] - damp * in(c)[m.index] - o;
      }
    });
  });
  if (nudge && !nudge->empty()) out += leray_project(dealias(*nudge));
  out.set_solenoidal(true);
  return out;
}

SpectralField Model::rk4_step(const SpectralField& state, double t, double dt, const NudgeHook& hook) const {
  const auto stage = [&](const SpectralField& s, double ts) {
    if (!hook) return rhs(s);
    const auto nudge = hook(s, ts);
    return rhs(s, nudge ? &*nudge : nullptr);
  };
  const SpectralField k1 = stage(state, t);
  SpectralField tmp = state;
  tmp.add_scaled(0.5 * dt, k1);
  const SpectralField k2 = stage(tmp, t + 0.5 * dt);
  tmp = state;
  tmp.add_scaled(0.5 * dt, k2);
  const SpectralField k3 = stage(tmp, t + 0.5 * dt);
  tmp = state;
  tmp.add_scaled(dt, k3);
  const SpectralField k4 = stage(tmp, t + dt);

  SpectralField next = state;
  next.add_scaled(dt / 6.0, k1);
  next.add_scaled(dt / 3.0, k2);
  next.add_scaled(dt / 3.0, k3);
  next.add_scaled(dt / 6.0, k4);
  if (!next.all_finite()) throw BlowUpError("non-finite state after RK4 step at t = " + std::to_string(t));
  return leray_project(next);
}

double max_velocity(const SpectralField& state) {
  const auto phys = to_physical(state);
  const std::size_t np = state.grid().physical_size();
  double worst = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    double sq = 0.0;
    for (const auto& comp : phys.components) sq += comp[p] * comp[p];
    worst = std::max(worst, sq);
  }
  return std::sqrt(worst);
}

double cfl_dt(const SpectralField& state, const SolverParams& params) {
  if (params.dt_fixed) return *params.dt_fixed;
  const double umax = max_velocity(state);
  if (!(umax > 0.0)) return params.dt_max;
  return std::min(params.dt_max, params.cfl_number * state.grid().spacing() / umax);
}

double clip_to_boundary(double t, double dt, double boundary) {
  const double remaining = boundary - t;
  if (remaining > 0.0 && remaining <= dt * (1.0 + 1e-8)) return remaining;
  return dt;
}

}  // namespace ndas
