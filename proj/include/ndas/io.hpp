#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ndas/experiment.hpp"

namespace ndas {

// ---- run configuration ------------------------------------------------------

/// Parses flat `key = value` text ('#' starts a comment). Unknown keys,
/// malformed numbers and violated invariants raise ConfigError naming the
/// offending line. `preset = paper-512` loads the large reference
/// configuration before any explicit key is applied, so explicit keys
/// override it wherever they appear.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical form: every key, fixed order, %.17g numbers. Parsing the result
/// gives back the same configuration.
std::string serialize_config(const ExperimentConfig& cfg);
/// FNV-1a 64 of serialize_config.
std::uint64_t config_hash(const ExperimentConfig& cfg);
/// Applies a named preset; throws ConfigError for unknown names.
void apply_preset(ExperimentConfig& cfg, const std::string& name);

// ---- snapshots ----------------------------------------------------------------

/// Layout (little-endian):
///   "NDAS" | u32 version=1 | u32 dim | u32 n | u32 field count | f64 nu | f64 t
///   then per field, per component, the half-layout coefficients in storage
///   order (first axis slowest, last axis 0..n/2 fastest) as f64 re, f64 im.
/// The box length is not stored; readers supply it (default 1).
struct Snapshot {
  int dim = 0;
  int n = 0;
  double nu = 0.0;
  double t = 0.0;
  std::vector<SpectralField> fields;
};

inline constexpr std::uint32_t snapshot_version = 1;

std::string encode_snapshot(const Snapshot& snap);
Snapshot decode_snapshot(const std::string& bytes, double L = 1.0);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path, double L = 1.0);

// ---- checkpoints --------------------------------------------------------------

/// "NDCK" | u32 version=1 | u64 config hash | u64 steps | u64 next observation |
/// f64 t | u64 row count | rows (t, err_l2, err_h1, energy_ref, energy_twin as
/// f64, nudge_active as u32) | u64 length + snapshot(reference) |
/// u64 length + snapshot(twin).
void write_checkpoint(const std::filesystem::path& path, const TwinState& state, const ExperimentConfig& cfg);
/// Throws FormatError on malformed files and ConfigError when the stored hash
/// does not match `cfg`.
TwinState read_checkpoint(const std::filesystem::path& path, const ExperimentConfig& cfg);

// ---- CSV ------------------------------------------------------------------------

inline constexpr const char* timeseries_schema = "# ndas timeseries v1";
std::string timeseries_csv(const TimeSeries& series);
std::string sweep_csv(const std::vector<SweepRow>& rows);
/// shell,energy per field (field column added when more than one).
std::string spectrum_csv(const Snapshot& snap);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Entry point of the command-line tool; returns the process exit status.
int run_cli(int argc, const char* const* argv);

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_blowup = 3;

}  // namespace ndas
