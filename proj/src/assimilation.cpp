#include "ndas/assimilation.hpp"

#include <cmath>

#include "ndas/errors.hpp"
#include "ndas/fft.hpp"
#include "ndas/parallel.hpp"
#include "ndas/spectral_ops.hpp"

namespace ndas {

std::string to_string(InterpolantKind kind) {
  return kind == InterpolantKind::modal ? "modal" : "volume_average";
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::none: return "none";
    case Scheme::nudge_window: return "nudge_window";
    case Scheme::hot: return "hot";
  }
  return "none";
}

std::string to_string(FeedbackForm form) { return form == FeedbackForm::frozen ? "frozen" : "tracking"; }

InterpolantKind parse_interpolant_kind(const std::string& text) {
  if (text == "modal") return InterpolantKind::modal;
  if (text == "volume_average") return InterpolantKind::volume_average;
  throw ConfigError("unknown interpolant kind '" + text + "' (expected modal or volume_average)");
}

Scheme parse_scheme(const std::string& text) {
  if (text == "none") return Scheme::none;
  if (text == "nudge_window") return Scheme::nudge_window;
  if (text == "hot") return Scheme::hot;
  throw ConfigError("unknown scheme '" + text + "' (expected none, nudge_window or hot)");
}

FeedbackForm parse_feedback_form(const std::string& text) {
  if (text == "frozen") return FeedbackForm::frozen;
  if (text == "tracking") return FeedbackForm::tracking;
  throw ConfigError("unknown feedback form '" + text + "' (expected frozen or tracking)");
}

int InterpolantSpec::cells_per_axis(const Grid& grid) const {
  return static_cast<int>(std::lround(grid.length() / h));
}

void InterpolantSpec::validate(const Grid& grid) const {
  if (!(c0 > 0.0) || !(c1 > 0.0)) throw ConfigError("interpolant constants c0 and c1 must be positive");
  if (kind == InterpolantKind::modal) {
    if (m < 1) throw ConfigError("modal interpolant needs m >= 1");
    return;
  }
  if (!(h > 0.0) || h > grid.length() * (1.0 + 1e-12)) throw ConfigError("volume average needs 0 < h <= L");
  const double cells = grid.length() / h;
  const int rounded = cells_per_axis(grid);
  if (std::abs(cells - rounded) > 1e-9 * cells) throw ConfigError("volume average cell side h must divide L");
  if (grid.n() % rounded != 0 || (grid.n() / rounded) % 2 != 0) {
    throw ConfigError("volume average needs an even number of grid points per cell (n = " +
                      std::to_string(grid.n()) + ", L/h = " + std::to_string(rounded) + ")");
  }
}

void AssimilationConfig::validate(const Grid& grid) const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be positive");
  if (!std::isfinite(t0)) throw ConfigError("t0 must be finite");
  if (scheme == Scheme::nudge_window) {
    if (!(tau > 0.0) || tau > kappa) throw ConfigError("nudge_window needs 0 < tau <= kappa");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be finite and non-negative");
  }
  if (scheme == Scheme::hot && interpolant.kind != InterpolantKind::modal) {
    throw ConfigError("hot scheme requires a modal interpolant");
  }
  if (scheme != Scheme::none) interpolant.validate(grid);
}

std::vector<std::vector<double>> cell_means(const SpectralField& field, double h) {
  const Grid& g = field.grid();
  const int dim = g.dim();
  const int n = g.n();
  const int cells = static_cast<int>(std::lround(g.length() / h));
  const int per = n / cells;
  const double ku = g.k_unit();
  // Cell average of exp(i k x) over [x0, x0 + h) is exp(i k x0) phi(k h) with
  // phi(theta) = (exp(i theta) - 1) / (i theta): a box filter whose samples
  // at the cell corners are exactly the cell means.
  const auto phi = [](double theta) -> Complex {
    if (theta == 0.0) return {1.0, 0.0};
    return (std::exp(Complex{0.0, theta}) - 1.0) / Complex{0.0, theta};
  };
  SpectralField filtered = field;
  for_each_mode(g, [&](const Mode& m) {
    Complex factor{1.0, 0.0};
    for (int a = 0; a < dim; ++a) factor *= phi(ku * m.k[a] * h);
    for (int c = 0; c < dim; ++c) filtered.component(c)[m.index] *= factor;
  });
  auto fft = Fft::for_grid(g);
  RealArray samples(g.physical_size());
  std::size_t cell_total = 1;
  for (int a = 0; a < dim; ++a) cell_total *= static_cast<std::size_t>(cells);
  std::vector<std::vector<double>> means(static_cast<std::size_t>(dim), std::vector<double>(cell_total));
  for (int c = 0; c < dim; ++c) {
    fft->inverse(filtered.component(c), samples);
    std::size_t cell = 0;
    for (int i = 0; i < cells; ++i)
      for (int j = 0; j < cells; ++j)
        for (int l = 0; l < (dim == 3 ? cells : 1); ++l, ++cell) {
          std::size_t p = static_cast<std::size_t>(i * per) * n + static_cast<std::size_t>(j * per);
          if (dim == 3) p = p * n + static_cast<std::size_t>(l * per);
          means[c][cell] = samples[p];
        }
  }
  return means;
}

namespace {

SpectralField volume_average(const SpectralField& field, double h) {
  const Grid& g = field.grid();
  const int dim = g.dim();
  const int n = g.n();
  const int cells = static_cast<int>(std::lround(g.length() / h));
  const int per = n / cells;
  const auto means = cell_means(field, h);
  PhysicalField phys{field.grid_ptr(), {}};
  for (int c = 0; c < dim; ++c) {
    RealArray samples(g.physical_size());
    std::size_t p = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < (dim == 3 ? n : 1); ++l, ++p) {
          std::size_t cell = static_cast<std::size_t>(i / per) * cells + static_cast<std::size_t>(j / per);
          if (dim == 3) cell = cell * cells + static_cast<std::size_t>(l / per);
          samples[p] = means[c][cell];
        }
    phys.components.push_back(std::move(samples));
  }
  // from_physical drops k = 0, which is the zero-mean correction.
  return from_physical(phys);
}

}  // namespace

SpectralField interpolate(const SpectralField& field, const InterpolantSpec& spec) {
  spec.validate(field.grid());
  if (spec.kind == InterpolantKind::modal) return project_low_modes(field, spec.m);
  return volume_average(field, spec.h);
}

double volume_average_error_sq(const SpectralField& field, double h) {
  const auto means = cell_means(field, h);
  const double cell_volume = std::pow(h, field.grid().dim());
  double captured = 0.0;
  for (const auto& comp : means)
    for (double v : comp) captured += v * v;
  return std::max(0.0, l2_norm_sq(field) - cell_volume * captured);
}

ObservationPtr observe(const SpectralField& reference, const SpectralField& twin, double t_n,
                       std::size_t index, const AssimilationConfig& cfg) {
  auto record = std::make_shared<ObservationRecord>();
  record->t_n = t_n;
  record->index = index;
  record->kind = cfg.interpolant.kind;
  record->m = cfg.interpolant.m;
  record->obs_u = interpolate(reference, cfg.interpolant);
  if (cfg.feedback_form == FeedbackForm::frozen) record->obs_v = interpolate(twin, cfg.interpolant);
  return record;
}

bool window_active(const ObservationRecord& record, double t, const AssimilationConfig& cfg) {
  return t >= record.t_n && t < record.t_n + cfg.tau;
}

SpectralField feedback(const ObservationRecord& record, const SpectralField& twin, const AssimilationConfig& cfg) {
  SpectralField diff = record.obs_u;
  if (cfg.feedback_form == FeedbackForm::frozen) {
    if (!record.obs_v) throw ConfigError("frozen feedback needs an observation record with twin data");
    diff -= *record.obs_v;
  } else {
    diff -= interpolate(twin, cfg.interpolant);
  }
  diff *= cfg.mu;
  return leray_project(diff);
}

SpectralField nudging_force(const ObservationRecord& record, const SpectralField& twin, double t,
                            const AssimilationConfig& cfg) {
  if (cfg.scheme != Scheme::nudge_window || !window_active(record, t, cfg)) return SpectralField(twin.grid_ptr());
  return feedback(record, twin, cfg);
}

SpectralField hot_replace(const SpectralField& twin, const ObservationRecord& record, std::size_t m) {
  if (record.kind != InterpolantKind::modal) throw ConfigError("hot replacement requires modal observations");
  SpectralField out = twin;
  const Grid& g = twin.grid();
  const std::int64_t cutoff = g.shell_sq(m);
  for_each_mode(g, [&](const Mode& mode) {
    if (mode.k_sq > cutoff) return;
    for (int c = 0; c < g.dim(); ++c) out.component(c)[mode.index] = record.obs_u.component(c)[mode.index];
  });
  out.set_solenoidal(twin.is_solenoidal() && record.obs_u.is_solenoidal());
  return out;
}

double next_boundary(double t, std::size_t n, const AssimilationConfig& cfg) {
  const double t_n = cfg.observation_time(n);
  const double t_next = cfg.observation_time(n + 1);
  if (cfg.scheme == Scheme::nudge_window && cfg.tau < cfg.kappa) {
    const double close = t_n + cfg.tau;
    if (t < close) return close;
  }
  return t_next;
}

}  // namespace ndas
