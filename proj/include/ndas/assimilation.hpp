#pragma once

#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include "ndas/field.hpp"

namespace ndas {

enum class InterpolantKind { modal, volume_average };
enum class Scheme { none, nudge_window, hot };
enum class FeedbackForm { frozen, tracking };

std::string to_string(InterpolantKind kind);
std::string to_string(Scheme scheme);
std::string to_string(FeedbackForm form);
InterpolantKind parse_interpolant_kind(const std::string& text);
Scheme parse_scheme(const std::string& text);
FeedbackForm parse_feedback_form(const std::string& text);

/// Spatial observation operator. Modal keeps the first m shells; volume
/// averaging takes exact means over cubes of side h. c0 and c1 are the
/// constants of the interpolant inequality ||xi - I xi||^2 <= c0 h^2 ||xi||_H1^2
/// reported to the theory checker.
struct InterpolantSpec {
  InterpolantKind kind = InterpolantKind::modal;
  std::size_t m = 1;
  double h = 0.25;
  double c0 = 1.0 / (std::numbers::pi * std::numbers::pi);
  double c1 = 1.0;

  /// Modal: m >= 1. Volume average: 0 < h <= L, L/h integer, and an even
  /// number of grid points per cell so cell-constant data carries no
  /// Nyquist content.
  void validate(const Grid& grid) const;
  /// Cells per axis, L/h rounded (volume average only).
  int cells_per_axis(const Grid& grid) const;
};

struct AssimilationConfig {
  Scheme scheme = Scheme::nudge_window;
  double mu = 1.0;
  double kappa = 1e-3;
  double tau = 1e-3;
  InterpolantSpec interpolant;
  FeedbackForm feedback_form = FeedbackForm::frozen;
  /// First observation instant.
  double t0 = 0.0;

  void validate(const Grid& grid) const;
  double observation_time(std::size_t n) const { return t0 + static_cast<double>(n) * kappa; }
};

/// Observation captured at t_n. Shared read-only once built.
struct ObservationRecord {
  double t_n = 0.0;
  std::size_t index = 0;
  InterpolantKind kind = InterpolantKind::modal;
  std::size_t m = 0;
  SpectralField obs_u;
  /// I(v(t_n)), present for the frozen feedback form.
  std::optional<SpectralField> obs_v;
};
using ObservationPtr = std::shared_ptr<const ObservationRecord>;

/// I(field): modal -> P_m field; volume average -> cell means re-expanded as a
/// piecewise-constant grid field, zero mean. Always spectral on the input grid.
SpectralField interpolate(const SpectralField& field, const InterpolantSpec& spec);

/// Exact means of every component over each cell of side h, computed from the
/// Fourier series (no quadrature error). Layout: [component][cell], cells
/// row-major with the last axis fastest.
std::vector<std::vector<double>> cell_means(const SpectralField& field, double h);

/// Continuous ||xi - I_h xi||^2 for the volume-average interpolant: I_h is the
/// L2-orthogonal projection onto cell-constant functions, so the error is
/// ||xi||^2 - h^dim sum_cells mean^2.
double volume_average_error_sq(const SpectralField& field, double h);

ObservationPtr observe(const SpectralField& reference, const SpectralField& twin, double t_n,
                       std::size_t index, const AssimilationConfig& cfg);

/// chi_{n,tau}(t): true for t in [t_n, t_n + tau).
bool window_active(const ObservationRecord& record, double t, const AssimilationConfig& cfg);

/// Feedback without the window indicator: mu (obs_u - obs_v) for the frozen
/// form, mu (obs_u - I(twin)) for the tracking form; Leray-projected.
SpectralField feedback(const ObservationRecord& record, const SpectralField& twin, const AssimilationConfig& cfg);

/// chi_{n,tau}(t) * feedback. Zero field outside the window.
SpectralField nudging_force(const ObservationRecord& record, const SpectralField& twin, double t,
                            const AssimilationConfig& cfg);

/// HOT: low shells (|k|^2 <= lambda_m) copied from obs_u, the rest from twin.
/// The record must come from a modal interpolant (ConfigError otherwise).
SpectralField hot_replace(const SpectralField& twin, const ObservationRecord& record, std::size_t m);

/// Next instant after t at which stepping must stop: the close of the active
/// window t_n + tau when tau < kappa and it is still ahead, else t_{n+1}.
double next_boundary(double t, std::size_t n, const AssimilationConfig& cfg);

}  // namespace ndas
