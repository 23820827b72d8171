#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "ndas/errors.hpp"
#include "ndas/io.hpp"
#include "ndas/spectral_ops.hpp"
#include "ndas/theory.hpp"

namespace ndas {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path output_path(const ExperimentConfig& cfg, const std::string& override_path, const char* name) {
  if (!override_path.empty()) return override_path;
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

SpectralField load_field(const std::string& path, const ExperimentConfig& cfg) {
  Snapshot snap = read_snapshot(path, cfg.L);
  if (snap.dim != cfg.dim || snap.n != cfg.n || snap.fields.empty()) {
    throw FormatError(path + " does not hold a field on the configured grid");
  }
  SpectralField f = std::move(snap.fields.front());
  f.set_solenoidal(true);
  return f;
}

int cmd_ramp(const std::string& config, const std::string& output) {
  const ExperimentConfig cfg = load_config(config);
  const SpectralField u = ramp_up(cfg);
  const fs::path path = output_path(cfg, output, "reference.snap");
  write_snapshot(path, Snapshot{cfg.dim, cfg.n, cfg.solver.nu, cfg.T_ramp, {u}});
  std::cout << "wrote " << path.string() << " (energy " << fmt(0.5 * l2_norm_sq(u)) << ")\n";
  return exit_ok;
}

struct RunOptions {
  std::string config;
  std::string reference;
  std::string twin;
  std::string csv;
  std::string resume;
  std::string checkpoint;
  std::size_t checkpoint_every = 0;
};

int cmd_run(const RunOptions& opt) {
  const ExperimentConfig cfg = load_config(opt.config);
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  write_text(dir / "config.txt", serialize_config(cfg));
  write_text(dir / "theory.txt", to_key_value(theory_report(theory_input(cfg.grid(), cfg.solver, cfg.assim, cfg.absolute_c))));

  std::unique_ptr<TwinExperiment> experiment;
  if (!opt.resume.empty()) {
    experiment = std::make_unique<TwinExperiment>(cfg, read_checkpoint(opt.resume, cfg));
  } else {
    SpectralField reference = opt.reference.empty() ? ramp_up(cfg) : load_field(opt.reference, cfg);
    SpectralField twin = opt.twin.empty() ? SpectralField(reference.grid_ptr()) : load_field(opt.twin, cfg);
    experiment = std::make_unique<TwinExperiment>(cfg, std::move(reference), std::move(twin));
  }
  if (!opt.checkpoint.empty() && opt.checkpoint_every > 0) {
    const fs::path ck = opt.checkpoint;
    const std::size_t every = opt.checkpoint_every;
    experiment->on_boundary([&cfg, ck, every](const TwinState& st) {
      if (st.next_observation > 0 && st.next_observation % every == 0) write_checkpoint(ck, st, cfg);
    });
  }
  const bool ok = experiment->run(cfg.assim.t0 + cfg.T);
  const TimeSeries series = experiment->series();
  const fs::path csv = output_path(cfg, opt.csv, "timeseries.csv");
  write_text(csv, timeseries_csv(series));
  const auto& st = experiment->state();
  write_snapshot(dir / "final_reference.snap", Snapshot{cfg.dim, cfg.n, cfg.solver.nu, st.t, {st.reference}});
  write_snapshot(dir / "final_twin.snap", Snapshot{cfg.dim, cfg.n, cfg.solver.nu, st.t, {st.twin}});
  if (!ok) {
    std::cerr << "blow-up: " << series.failure << " (partial series in " << csv.string() << ")\n";
    return exit_blowup;
  }
  const auto ct = convergence_time(series, cfg.tol);
  std::cout << "wrote " << csv.string() << " (" << series.rows.size() << " rows, final err_l2 "
            << fmt(series.rows.empty() ? 0.0 : series.rows.back().err_l2) << ", convergence time "
            << (ct ? fmt(*ct) : std::string("none")) << ")\n";
  return exit_ok;
}

int cmd_sweep(const std::string& config, const std::string& reference, const std::vector<double>& mu,
              const std::vector<double>& tau, const std::vector<std::string>& schemes, const std::string& output) {
  const ExperimentConfig cfg = load_config(config);
  std::vector<Scheme> list;
  for (const auto& s : schemes) list.push_back(parse_scheme(s));
  for (double t : tau)
    if (!(t > 0.0) || t > cfg.assim.kappa) throw ConfigError("every tau must lie in (0, kappa]");
  for (double m : mu)
    if (!(m >= 0.0)) throw ConfigError("every mu must be non-negative");
  const SpectralField u = reference.empty() ? ramp_up(cfg) : load_field(reference, cfg);
  const auto rows = sweep(cfg, u, mu, tau, list);
  const fs::path path = output_path(cfg, output, "sweep.csv");
  write_text(path, sweep_csv(rows));
  std::cout << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
  return exit_ok;
}

int cmd_check(const std::string& config, bool csv, const std::string& output) {
  const ExperimentConfig cfg = load_config(config);
  const auto report = theory_report(theory_input(cfg.grid(), cfg.solver, cfg.assim, cfg.absolute_c));
  const std::string text = csv ? to_csv(report) : to_key_value(report);
  if (output.empty()) {
    std::cout << text;
  } else {
    write_text(output, text);
  }
  return exit_ok;
}

int cmd_spectrum(const std::string& path, double L, const std::string& output) {
  const std::string text = spectrum_csv(read_snapshot(path, L));
  if (output.empty()) {
    std::cout << text;
  } else {
    write_text(output, text);
  }
  return exit_ok;
}

int cmd_diff(const std::string& a_path, const std::string& b_path, double L) {
  const Snapshot a = read_snapshot(a_path, L);
  const Snapshot b = read_snapshot(b_path, L);
  if (a.dim != b.dim || a.n != b.n || a.fields.size() != b.fields.size()) {
    throw FormatError("snapshots differ in grid or field count");
  }
  for (std::size_t f = 0; f < a.fields.size(); ++f) {
    const Norms e = norms(a.fields[f] - b.fields[f]);
    std::cout << "field=" << f << " err_l2=" << fmt(e.l2) << " err_h1=" << fmt(e.h1)
              << " err_lap=" << fmt(e.l2_of_laplacian) << '\n';
  }
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Pseudospectral Navier-Stokes twin experiments with windowed nudging"};
  app.require_subcommand(1);

  std::string config, output, reference;
  auto* ramp = app.add_subcommand("ramp", "evolve a seeded random field and write the reference snapshot");
  ramp->add_option("-c,--config", config, "run configuration")->required();
  ramp->add_option("-o,--output", output, "snapshot path (default <out_dir>/reference.snap)");

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "twin experiment: time series CSV and final snapshots");
  run->add_option("-c,--config", run_opt.config, "run configuration")->required();
  run->add_option("--reference", run_opt.reference, "reference snapshot (default: ramp up from the config)");
  run->add_option("--twin", run_opt.twin, "initial twin snapshot (default: zero)");
  run->add_option("--csv", run_opt.csv, "time series path (default <out_dir>/timeseries.csv)");
  run->add_option("--resume", run_opt.resume, "continue from a checkpoint");
  run->add_option("--checkpoint", run_opt.checkpoint, "checkpoint path");
  run->add_option("--checkpoint-every", run_opt.checkpoint_every, "write the checkpoint every k observations");

  std::vector<double> mu_list, tau_list;
  std::vector<std::string> scheme_list{"nudge_window"};
  auto* sweep_cmd = app.add_subcommand("sweep", "convergence table over mu, tau and schemes");
  sweep_cmd->add_option("-c,--config", config, "base configuration")->required();
  sweep_cmd->add_option("--mu", mu_list, "mu values")->delimiter(',');
  sweep_cmd->add_option("--tau", tau_list, "tau values")->delimiter(',');
  sweep_cmd->add_option("--schemes", scheme_list, "nudge_window, hot, none")->delimiter(',');
  sweep_cmd->add_option("--reference", reference, "reference snapshot (default: ramp up)");
  sweep_cmd->add_option("-o,--output", output, "table path (default <out_dir>/sweep.csv)");

  bool csv = false;
  auto* check = app.add_subcommand("check", "evaluate the convergence conditions (advisory)");
  check->add_option("-c,--config", config, "run configuration")->required();
  check->add_flag("--csv", csv, "one CSV row per condition");
  check->add_option("-o,--output", output, "write the report here instead of stdout");

  std::string snap_a, snap_b;
  double length = 1.0;
  auto* spectrum = app.add_subcommand("spectrum", "shell energy spectrum of a snapshot");
  spectrum->add_option("snapshot", snap_a)->required();
  spectrum->add_option("--length", length, "box side L");
  spectrum->add_option("-o,--output", output, "CSV path (default stdout)");

  auto* diff = app.add_subcommand("diff", "error norms between two snapshots");
  diff->add_option("a", snap_a)->required();
  diff->add_option("b", snap_b)->required();
  diff->add_option("--length", length, "box side L");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*ramp) return cmd_ramp(config, output);
    if (*run) return cmd_run(run_opt);
    if (*sweep_cmd) {
      if (mu_list.empty()) mu_list.push_back(load_config(config).assim.mu);
      if (tau_list.empty()) tau_list.push_back(load_config(config).assim.tau);
      return cmd_sweep(config, reference, mu_list, tau_list, scheme_list, output);
    }
    if (*check) return cmd_check(config, csv, output);
    if (*spectrum) return cmd_spectrum(snap_a, length, output);
    if (*diff) return cmd_diff(snap_a, snap_b, length);
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return exit_blowup;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_usage;
}

}  // namespace ndas
