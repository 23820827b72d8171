#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ndas/field.hpp"

namespace ndas {

enum class ForcingKind { none, taylor_green };

std::string to_string(ForcingKind kind);
ForcingKind parse_forcing(const std::string& text);

struct SolverParams {
  double nu = 1e-3;
  ForcingKind forcing = ForcingKind::taylor_green;
  double cfl_number = 0.5;
  std::optional<double> dt_fixed;
  /// Cap on the adaptive step; also the step used when the velocity is zero.
  double dt_max = 1e-2;

  /// Throws ConfigError unless nu > 0, cfl in (0, 1], dt_fixed > 0, dt_max > 0.
  void validate() const;
};

/// Taylor-Green forcing. In 3D
///   f = (sin ax cos ay cos az, -cos ax sin ay cos az, 0),  a = 2 pi / L;
/// in 2D the z-independent restriction (sin ax cos ay, -cos ax sin ay).
SpectralField taylor_green_forcing(const GridPtr& grid);

/// Returned by a NudgeHook when no feedback acts on the current stage.
using NudgeHook = std::function<std::optional<SpectralField>(const SpectralField& stage_state, double stage_t)>;

/// Right-hand side of the (optionally nudged) projected Navier-Stokes system
///   du/dt = -nu A u - B(u,u) + f + P_sigma(nudge),
/// with the nudge restricted to the dealiased band so the state stays there.
class Model {
 public:
  Model(GridPtr grid, SolverParams params);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const SolverParams& params() const { return params_; }
  const SpectralField& forcing() const { return forcing_; }

  SpectralField rhs(const SpectralField& state, const SpectralField* nudge = nullptr) const;

  /// One classical RK4 step. The hook is consulted at each stage with the
  /// stage state and stage time; the result is re-projected and checked for
  /// non-finite values (BlowUpError).
  SpectralField rk4_step(const SpectralField& state, double t, double dt, const NudgeHook& hook = {}) const;

 private:
  GridPtr grid_;
  SolverParams params_;
  SpectralField forcing_;
};

/// Largest |u(x)| over grid points (Euclidean magnitude).
double max_velocity(const SpectralField& state);

/// Advective CFL step: dt_fixed if set, otherwise
/// min(dt_max, cfl * dx / max|u|), with dt_max when the velocity vanishes.
double cfl_dt(const SpectralField& state, const SolverParams& params);

/// Shortens dt so that t + dt lands exactly on `boundary` when the boundary
/// lies in (t, t + dt]. Boundaries within a relative 1e-8 of the step are
/// snapped onto rather than leaving a sliver step.
double clip_to_boundary(double t, double dt, double boundary);

}  // namespace ndas
