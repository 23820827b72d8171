#include "ndas/experiment.hpp"

#include <cmath>
#include <random>

#include "ndas/errors.hpp"
#include "ndas/spectral_ops.hpp"

namespace ndas {

void ExperimentConfig::validate() const {
  const GridPtr g = grid();
  solver.validate();
  assim.validate(*g);
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T must be positive");
  if (!(T_ramp >= 0.0) || !std::isfinite(T_ramp)) throw ConfigError("T_ramp must be non-negative");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(absolute_c > 0.0)) throw ConfigError("absolute_c must be positive");
  if (!(k0 >= 0.0) || !std::isfinite(k0)) throw ConfigError("k0 must be non-negative");
}

double ramp_profile(double k, double k0) {
  const double r = k / k0;
  return k * k * k * k * std::exp(-2.0 * r * r);
}

SpectralField random_initial_field(const GridPtr& grid, std::uint64_t seed, double k0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PhysicalField noise{grid, {}};
  for (int c = 0; c < grid->dim(); ++c) {
    RealArray samples(grid->physical_size());
    for (auto& s : samples) s = normal(rng);
    noise.components.push_back(std::move(samples));
  }
  SpectralField u = dealias(leray_project(from_physical(noise)));

  const auto current = energy_spectrum(u);
  std::vector<double> target(current.size(), 0.0);
  double total = 0.0;
  for (std::size_t s = 1; s < current.size(); ++s) {
    if (current[s] > 0.0) {
      target[s] = ramp_profile(static_cast<double>(s), k0);
      total += target[s];
    }
  }
  if (!(total > 0.0)) throw ConfigError("initial spectrum has no energy on the retained shells");
  std::vector<double> factor(current.size(), 0.0);
  for (std::size_t s = 1; s < current.size(); ++s)
    if (current[s] > 0.0) factor[s] = std::sqrt(target[s] / total / current[s]);
  for_each_mode(*grid, [&](const Mode& m) {
    const double f = factor[shell_of(m.k_sq)];
    for (int c = 0; c < grid->dim(); ++c) u.component(c)[m.index] *= f;
  });
  return u;
}

SpectralField ramp_up(const ExperimentConfig& cfg) {
  const GridPtr grid = cfg.grid();
  SpectralField u = random_initial_field(grid, cfg.seed, cfg.peak());
  if (cfg.T_ramp <= 0.0) return u;
  const Model model(grid, cfg.solver);
  double t = 0.0;
  try {
    while (t < cfg.T_ramp * (1.0 - 1e-12)) {
      const double remaining = cfg.T_ramp - t;
      const double dt = clip_to_boundary(t, cfl_dt(u, cfg.solver), cfg.T_ramp);
      u = model.rk4_step(u, t, dt);
      t = dt == remaining ? cfg.T_ramp : t + dt;
    }
  } catch (const BlowUpError& e) {
    throw BlowUpError(std::string(e.what()) + " during ramp-up; reduce dt (cfl, dt_fixed) or the ramp energy");
  }
  return u;
}

TwinExperiment::TwinExperiment(const ExperimentConfig& cfg, SpectralField reference, SpectralField twin)
    : cfg_(cfg), model_(cfg.grid(), cfg.solver) {
  cfg_.validate();
  state_.reference = std::move(reference);
  state_.twin = std::move(twin);
  state_.t = cfg_.assim.t0;
}

TwinExperiment::TwinExperiment(const ExperimentConfig& cfg, TwinState resume)
    : cfg_(cfg), model_(cfg.grid(), cfg.solver), state_(std::move(resume)) {
  cfg_.validate();
}

void TwinExperiment::push_row(int nudge_active) {
  const SpectralField diff = state_.reference - state_.twin;
  const Norms e = norms(diff);
  TimeSeriesRow row;
  row.t = state_.t;
  row.err_l2 = e.l2;
  row.err_h1 = e.h1;
  row.energy_ref = 0.5 * l2_norm_sq(state_.reference);
  row.energy_twin = 0.5 * l2_norm_sq(state_.twin);
  row.nudge_active = nudge_active;
  state_.rows.push_back(row);
}

void TwinExperiment::take_observation() {
  const auto& a = cfg_.assim;
  const std::size_t index = state_.next_observation++;
  if (a.scheme == Scheme::none) {
    record_.reset();
  } else {
    record_ = observe(state_.reference, state_.twin, state_.t, index, a);
    if (a.scheme == Scheme::hot) state_.twin = hot_replace(state_.twin, *record_, a.interpolant.m);
    if (a.scheme == Scheme::nudge_window && a.feedback_form == FeedbackForm::frozen) {
      frozen_force_ = feedback(*record_, state_.twin, a);
    }
    if (on_observation_) on_observation_(*record_, state_.reference, state_.twin);
  }
  if (state_.rows.empty()) push_row(0);
}

void TwinExperiment::step(double t_end) {
  const auto& a = cfg_.assim;
  const double t = state_.t;
  const std::size_t current = state_.next_observation - 1;
  const double boundary = std::min(next_boundary(t, current, a), t_end);
  const double remaining = boundary - t;
  const double dt = clip_to_boundary(t, cfl_dt(state_.reference, cfg_.solver), boundary);
  const bool active = a.scheme == Scheme::nudge_window && record_ && window_active(*record_, t, a);

  NudgeHook hook;
  if (active) {
    if (a.feedback_form == FeedbackForm::frozen) {
      hook = [this](const SpectralField&, double) -> std::optional<SpectralField> { return frozen_force_; };
    } else {
      hook = [this, &a](const SpectralField& stage, double) -> std::optional<SpectralField> {
        return feedback(*record_, stage, a);
      };
    }
  }
  try {
    SpectralField ref = model_.rk4_step(state_.reference, t, dt);
    SpectralField twin = model_.rk4_step(state_.twin, t, dt, hook);
    state_.reference = std::move(ref);
    state_.twin = std::move(twin);
  } catch (const BlowUpError& e) {
    failed_ = true;
    failure_ = e.what();
    return;
  }
  state_.t = dt == remaining ? boundary : t + dt;
  ++state_.steps;
  push_row(active ? 1 : 0);
}

bool TwinExperiment::run(double t_end) {
  const double snap = 1e-9 * cfg_.assim.kappa;
  while (!failed_) {
    if (state_.t >= t_end - snap) break;
    if (cfg_.assim.observation_time(state_.next_observation) <= state_.t + snap) {
      if (on_boundary_) on_boundary_(state_);
      take_observation();
      continue;
    }
    step(t_end);
  }
  return !failed_;
}

TimeSeries TwinExperiment::series() const {
  TimeSeries s;
  s.scheme = to_string(cfg_.assim.scheme);
  s.rows = state_.rows;
  s.failed = failed_;
  s.failure = failure_;
  return s;
}

TimeSeries run_twin(const ExperimentConfig& cfg, const SpectralField& reference_initial,
                    const std::optional<SpectralField>& twin_initial,
                    TwinExperiment::ObservationCallback on_observation) {
  SpectralField twin = twin_initial ? *twin_initial : SpectralField(reference_initial.grid_ptr());
  TwinExperiment experiment(cfg, reference_initial, std::move(twin));
  experiment.on_observation(std::move(on_observation));
  experiment.run(cfg.assim.t0 + cfg.T);
  return experiment.series();
}

std::optional<double> convergence_time(const TimeSeries& series, double tol) {
  if (series.failed || series.rows.empty()) return std::nullopt;
  std::size_t first = series.rows.size();
  while (first > 0 && series.rows[first - 1].err_l2 <= tol) --first;
  if (first == series.rows.size()) return std::nullopt;
  return series.rows[first].t;
}

std::vector<SweepRow> sweep(const ExperimentConfig& base, const SpectralField& reference_initial,
                            const std::vector<double>& mu_list, const std::vector<double>& tau_list,
                            const std::vector<Scheme>& scheme_list) {
  if (scheme_list.empty()) throw ConfigError("sweep needs at least one scheme");
  std::vector<SweepRow> rows;
  const auto run_row = [&](Scheme scheme, double mu, double tau) {
    SweepRow row;
    row.scheme = scheme;
    row.mu = mu;
    row.tau = tau;
    ExperimentConfig cfg = base;
    cfg.assim.scheme = scheme;
    cfg.assim.mu = mu;
    cfg.assim.tau = tau;
    const TimeSeries s = run_twin(cfg, reference_initial);
    row.convergence_time = convergence_time(s, cfg.tol);
    row.final_err = s.rows.empty() ? std::nan("") : s.rows.back().err_l2;
    row.failed = s.failed;
    row.failure = s.failure;
    rows.push_back(row);
  };
  for (Scheme scheme : scheme_list) {
    if (scheme != Scheme::nudge_window) {
      run_row(scheme, base.assim.mu, base.assim.tau);
      continue;
    }
    if (mu_list.empty() || tau_list.empty()) throw ConfigError("nudge_window sweep needs mu and tau lists");
    for (double tau : tau_list)
      for (double mu : mu_list) run_row(scheme, mu, tau);
  }
  return rows;
}

}  // namespace ndas
