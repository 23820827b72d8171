#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ndas/assimilation.hpp"
#include "ndas/dynamics.hpp"

namespace ndas {

struct ExperimentConfig {
  int dim = 2;
  int n = 64;
  double L = 1.0;
  SolverParams solver;
  AssimilationConfig assim;
  std::uint64_t seed = 1;
  /// Peak of the initial spectrum in integer shells; 0 selects n/8.
  double k0 = 0.0;
  double T_ramp = 0.0;
  double T = 1.0;
  double tol = 1e-6;
  double absolute_c = 1.0;
  std::string out_dir = ".";

  GridPtr grid() const { return build_grid(dim, n, L); }
  double peak() const { return k0 > 0.0 ? k0 : n / 8.0; }
  void validate() const;
};

/// Seeded random solenoidal, dealiased field whose shell energies follow
/// E(k) = A k^4 exp(-2 (k/k0)^2) exactly, with A fixing sum_k E(k) = 1.
SpectralField random_initial_field(const GridPtr& grid, std::uint64_t seed, double k0);
/// Target profile before normalization (A = 1).
double ramp_profile(double k, double k0);

/// Random initial field evolved under the configured forcing for T_ramp,
/// CFL-adaptive (BlowUpError with a diagnostic on instability).
SpectralField ramp_up(const ExperimentConfig& cfg);

struct TimeSeriesRow {
  double t = 0.0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  double energy_ref = 0.0;
  double energy_twin = 0.0;
  /// Whether nudging acted on the step that ended at t (0 for the first row).
  int nudge_active = 0;
};

struct TimeSeries {
  std::string scheme;
  std::vector<TimeSeriesRow> rows;
  bool failed = false;
  std::string failure;
};

/// Everything needed to continue a twin run bit-identically. Taken at an
/// observation instant before that observation is made.
struct TwinState {
  SpectralField reference;
  SpectralField twin;
  double t = 0.0;
  std::uint64_t steps = 0;
  /// Index of the next observation to take (its time is t when captured at
  /// a boundary).
  std::uint64_t next_observation = 0;
  std::vector<TimeSeriesRow> rows;
};

/// Co-evolves a reference and a twin with one stepper and one dt sequence
/// (the reference's CFL step, clipped to observation and window boundaries).
class TwinExperiment {
 public:
  /// Called after each observation (and HOT replacement) with the record, the
  /// reference, and the twin as it continues.
  using ObservationCallback =
      std::function<void(const ObservationRecord&, const SpectralField& reference, const SpectralField& twin)>;
  /// Called at each observation instant before the observation is taken.
  using BoundaryCallback = std::function<void(const TwinState&)>;

  TwinExperiment(const ExperimentConfig& cfg, SpectralField reference, SpectralField twin);
  TwinExperiment(const ExperimentConfig& cfg, TwinState resume);

  void on_observation(ObservationCallback cb) { on_observation_ = std::move(cb); }
  void on_boundary(BoundaryCallback cb) { on_boundary_ = std::move(cb); }

  /// Steps until t reaches t_end. Returns false if either trajectory blew up.
  bool run(double t_end);

  const TwinState& state() const { return state_; }
  TimeSeries series() const;
  const Model& model() const { return model_; }

 private:
  void take_observation();
  void push_row(int nudge_active);
  void step(double t_end);

  ExperimentConfig cfg_;
  Model model_;
  TwinState state_;
  ObservationPtr record_;
  SpectralField frozen_force_;
  ObservationCallback on_observation_;
  BoundaryCallback on_boundary_;
  bool failed_ = false;
  std::string failure_;
};

/// Runs the twin experiment to cfg.T. The twin starts from `twin_initial` if
/// given, otherwise from zero. Blow-up yields a partial series with failed set.
TimeSeries run_twin(const ExperimentConfig& cfg, const SpectralField& reference_initial,
                    const std::optional<SpectralField>& twin_initial = std::nullopt,
                    TwinExperiment::ObservationCallback on_observation = {});

/// First t with err_l2 <= tol that stays <= tol to the end of the series.
std::optional<double> convergence_time(const TimeSeries& series, double tol);

struct SweepRow {
  Scheme scheme = Scheme::none;
  double mu = 0.0;
  double tau = 0.0;
  std::optional<double> convergence_time;
  double final_err = 0.0;
  bool failed = false;
  std::string failure;
};

/// One row per (tau, mu) pair for nudge_window and a single row for hot and
/// none, in the order of scheme_list, then tau_list, then mu_list. Every row
/// starts from the same reference state and a zero twin.
std::vector<SweepRow> sweep(const ExperimentConfig& base, const SpectralField& reference_initial,
                            const std::vector<double>& mu_list, const std::vector<double>& tau_list,
                            const std::vector<Scheme>& scheme_list);

}  // namespace ndas
