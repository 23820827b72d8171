#include "ndas/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ndas/errors.hpp"
#include "ndas/spectral_ops.hpp"

namespace ndas {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& key, const std::string& text, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail(line, "malformed number '" + text + "' for " + key);
  return v;
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& text, int line) {
  Int v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(line, "malformed integer '" + text + "' for " + key);
  return v;
}

struct Entry {
  std::string value;
  int line = 0;
};

}  // namespace

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
  if (name != "paper-512") throw ConfigError("unknown preset '" + name + "' (known: paper-512)");
  cfg.dim = 3;
  cfg.n = 512;
  cfg.L = 1.0;
  cfg.solver.nu = 3.58979e-4;
  cfg.solver.forcing = ForcingKind::taylor_green;
  cfg.solver.dt_fixed = 1e-4;
  cfg.assim.scheme = Scheme::nudge_window;
  cfg.assim.mu = 5.0;
  cfg.assim.kappa = 1e-3;
  cfg.assim.tau = 1e-3;
  cfg.assim.interpolant.kind = InterpolantKind::modal;
  // Truncation radius 100 in integer wavenumber units.
  cfg.assim.interpolant.m = build_grid(3, 512)->modes_within_radius(100.0);
  cfg.T_ramp = 15.0;
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) fail(line, "missing key");
    if (value.empty()) fail(line, "missing value for " + key);
    if (entries.count(key)) fail(line, "duplicate key " + key + " (first on line " + std::to_string(entries[key].line) + ")");
    entries[key] = {value, line};
  }

  ExperimentConfig cfg;
  cfg.assim.interpolant.m = 8;
  if (auto it = entries.find("preset"); it != entries.end()) {
    try {
      apply_preset(cfg, it->second.value);
    } catch (const ConfigError& e) {
      fail(it->second.line, e.what());
    }
  }

  const auto num = [&](const char* key, double& target, auto&& ok, const char* rule) {
    auto it = entries.find(key);
    if (it == entries.end()) return;
    const double v = parse_double(key, it->second.value, it->second.line);
    if (!ok(v)) fail(it->second.line, std::string(key) + " " + rule);
    target = v;
  };
  const auto positive = [](double v) { return v > 0.0; };
  const auto non_negative = [](double v) { return v >= 0.0; };

  for (const auto& [key, entry] : entries) {
    static const char* known[] = {"preset", "dim", "n", "L", "nu", "forcing", "cfl", "dt_fixed", "scheme", "mu",
                                  "kappa", "tau", "interp.kind", "interp.m", "interp.h", "interp.c0", "interp.c1",
                                  "feedback_form", "seed", "k0", "T_ramp", "T", "tol", "absolute_c", "out_dir"};
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) fail(entry.line, "unknown key '" + key + "'");
  }

  if (auto it = entries.find("dim"); it != entries.end()) {
    cfg.dim = parse_integer<int>("dim", it->second.value, it->second.line);
    if (cfg.dim != 2 && cfg.dim != 3) fail(it->second.line, "dim must be 2 or 3");
  }
  if (auto it = entries.find("n"); it != entries.end()) {
    cfg.n = parse_integer<int>("n", it->second.value, it->second.line);
    if (cfg.n < 4 || cfg.n % 2 != 0) fail(it->second.line, "n must be even and at least 4");
  }
  num("L", cfg.L, positive, "must be positive");
  num("nu", cfg.solver.nu, positive, "must be positive");
  if (auto it = entries.find("forcing"); it != entries.end()) {
    try {
      cfg.solver.forcing = parse_forcing(it->second.value);
    } catch (const ConfigError& e) {
      fail(it->second.line, e.what());
    }
  }
  num("cfl", cfg.solver.cfl_number, [](double v) { return v > 0.0 && v <= 1.0; }, "must lie in (0, 1]");
  if (auto it = entries.find("dt_fixed"); it != entries.end()) {
    if (it->second.value == "none") {
      cfg.solver.dt_fixed.reset();
    } else {
      double v = 0.0;
      num("dt_fixed", v, positive, "must be positive");
      cfg.solver.dt_fixed = v;
    }
  }
  if (auto it = entries.find("scheme"); it != entries.end()) {
    try {
      cfg.assim.scheme = parse_scheme(it->second.value);
    } catch (const ConfigError& e) {
      fail(it->second.line, e.what());
    }
  }
  num("mu", cfg.assim.mu, non_negative, "must be non-negative");
  num("kappa", cfg.assim.kappa, positive, "must be positive");
  if (entries.count("tau")) {
    num("tau", cfg.assim.tau, positive, "must be positive");
  } else {
    cfg.assim.tau = cfg.assim.kappa;
  }
  if (cfg.assim.tau > cfg.assim.kappa) {
    const int at = entries.count("tau") ? entries["tau"].line : entries["kappa"].line;
    fail(at, "tau = " + fmt(cfg.assim.tau) + " exceeds kappa = " + fmt(cfg.assim.kappa) + " (need tau <= kappa)");
  }
  if (auto it = entries.find("interp.kind"); it != entries.end()) {
    try {
      cfg.assim.interpolant.kind = parse_interpolant_kind(it->second.value);
    } catch (const ConfigError& e) {
      fail(it->second.line, e.what());
    }
  }
  if (auto it = entries.find("interp.m"); it != entries.end()) {
    cfg.assim.interpolant.m = parse_integer<std::size_t>("interp.m", it->second.value, it->second.line);
    if (cfg.assim.interpolant.m < 1) fail(it->second.line, "interp.m must be at least 1");
  }
  cfg.assim.interpolant.h = cfg.L / 4.0;
  num("interp.h", cfg.assim.interpolant.h, positive, "must be positive");
  num("interp.c0", cfg.assim.interpolant.c0, positive, "must be positive");
  num("interp.c1", cfg.assim.interpolant.c1, positive, "must be positive");
  if (auto it = entries.find("feedback_form"); it != entries.end()) {
    try {
      cfg.assim.feedback_form = parse_feedback_form(it->second.value);
    } catch (const ConfigError& e) {
      fail(it->second.line, e.what());
    }
  }
  if (auto it = entries.find("seed"); it != entries.end()) {
    cfg.seed = parse_integer<std::uint64_t>("seed", it->second.value, it->second.line);
  }
  num("k0", cfg.k0, non_negative, "must be non-negative");
  num("T_ramp", cfg.T_ramp, non_negative, "must be non-negative");
  num("T", cfg.T, positive, "must be positive");
  num("tol", cfg.tol, positive, "must be positive");
  num("absolute_c", cfg.absolute_c, positive, "must be positive");
  if (auto it = entries.find("out_dir"); it != entries.end()) cfg.out_dir = it->second.value;

  cfg.solver.dt_max = cfg.assim.kappa / 10.0;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  const auto& a = cfg.assim;
  out << "dim = " << cfg.dim << '\n'
      << "n = " << cfg.n << '\n'
      << "L = " << fmt(cfg.L) << '\n'
      << "nu = " << fmt(cfg.solver.nu) << '\n'
      << "forcing = " << to_string(cfg.solver.forcing) << '\n'
      << "cfl = " << fmt(cfg.solver.cfl_number) << '\n';
  if (cfg.solver.dt_fixed) out << "dt_fixed = " << fmt(*cfg.solver.dt_fixed) << '\n';
  out << "scheme = " << to_string(a.scheme) << '\n'
      << "mu = " << fmt(a.mu) << '\n'
      << "kappa = " << fmt(a.kappa) << '\n'
      << "tau = " << fmt(a.tau) << '\n'
      << "interp.kind = " << to_string(a.interpolant.kind) << '\n'
      << "interp.m = " << a.interpolant.m << '\n'
      << "interp.h = " << fmt(a.interpolant.h) << '\n'
      << "interp.c0 = " << fmt(a.interpolant.c0) << '\n'
      << "interp.c1 = " << fmt(a.interpolant.c1) << '\n'
      << "feedback_form = " << to_string(a.feedback_form) << '\n'
      << "seed = " << cfg.seed << '\n'
      << "k0 = " << fmt(cfg.k0) << '\n'
      << "T_ramp = " << fmt(cfg.T_ramp) << '\n'
      << "T = " << fmt(cfg.T) << '\n'
      << "tol = " << fmt(cfg.tol) << '\n'
      << "absolute_c = " << fmt(cfg.absolute_c) << '\n'
      << "out_dir = " << cfg.out_dir << '\n';
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serialize_config(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---- binary helpers -----------------------------------------------------------

namespace {

class Writer {
 public:
  void bytes(const char* p, std::size_t n) { out_.append(p, n); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string& data, const char* what) : data_(data), what_(what) {}
  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) throw FormatError(std::string(what_) + " is truncated");
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  const std::string& data_;
  const char* what_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_snapshot(const Snapshot& snap) {
  Writer w;
  w.bytes("NDAS", 4);
  w.u32(snapshot_version);
  w.u32(static_cast<std::uint32_t>(snap.dim));
  w.u32(static_cast<std::uint32_t>(snap.n));
  w.u32(static_cast<std::uint32_t>(snap.fields.size()));
  w.f64(snap.nu);
  w.f64(snap.t);
  for (const auto& f : snap.fields) {
    if (f.grid().dim() != snap.dim || f.grid().n() != snap.n) {
      throw FormatError("snapshot field does not match the header grid");
    }
    for (const Complex& c : f.data()) {
      w.f64(c.real());
      w.f64(c.imag());
    }
  }
  return w.take();
}

Snapshot decode_snapshot(const std::string& bytes, double L) {
  Reader r(bytes, "snapshot");
  if (r.bytes(4) != "NDAS") throw FormatError("not a snapshot file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != snapshot_version) {
    throw FormatError("unsupported snapshot version " + std::to_string(version) + " (this build reads version " +
                      std::to_string(snapshot_version) + ")");
  }
  Snapshot snap;
  snap.dim = static_cast<int>(r.u32());
  snap.n = static_cast<int>(r.u32());
  const std::uint32_t count = r.u32();
  snap.nu = r.f64();
  snap.t = r.f64();
  GridPtr grid;
  try {
    grid = build_grid(snap.dim, snap.n, L);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("snapshot header describes an invalid grid: ") + e.what());
  }
  const std::size_t per_field = grid->spectral_size() * static_cast<std::size_t>(snap.dim);
  const std::size_t expected = static_cast<std::size_t>(count) * per_field * 16;
  if (r.remaining() < expected) throw FormatError("snapshot is truncated");
  if (r.remaining() > expected) throw FormatError("snapshot has trailing bytes");
  for (std::uint32_t i = 0; i < count; ++i) {
    SpectralField f(grid);
    for (Complex& c : f.data()) {
      const double re = r.f64();
      c = Complex{re, r.f64()};
    }
    f.set_solenoidal(false);
    snap.fields.push_back(std::move(f));
  }
  return snap;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) { write_text(path, encode_snapshot(snap)); }

Snapshot read_snapshot(const std::filesystem::path& path, double L) { return decode_snapshot(read_text(path), L); }

void write_checkpoint(const std::filesystem::path& path, const TwinState& state, const ExperimentConfig& cfg) {
  Writer w;
  w.bytes("NDCK", 4);
  w.u32(1);
  w.u64(config_hash(cfg));
  w.u64(state.steps);
  w.u64(state.next_observation);
  w.f64(state.t);
  w.u64(state.rows.size());
  for (const auto& row : state.rows) {
    w.f64(row.t);
    w.f64(row.err_l2);
    w.f64(row.err_h1);
    w.f64(row.energy_ref);
    w.f64(row.energy_twin);
    w.u32(static_cast<std::uint32_t>(row.nudge_active));
  }
  for (const SpectralField* f : {&state.reference, &state.twin}) {
    const std::string blob = encode_snapshot(Snapshot{cfg.dim, cfg.n, cfg.solver.nu, state.t, {*f}});
    w.u64(blob.size());
    w.bytes(blob.data(), blob.size());
  }
  write_text(path, w.take());
}

TwinState read_checkpoint(const std::filesystem::path& path, const ExperimentConfig& cfg) {
  const std::string data = read_text(path);
  Reader r(data, "checkpoint");
  if (r.bytes(4) != "NDCK") throw FormatError("not a checkpoint file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != 1) throw FormatError("unsupported checkpoint version " + std::to_string(version));
  if (r.u64() != config_hash(cfg)) throw ConfigError("checkpoint was written for a different configuration");
  TwinState state;
  state.steps = r.u64();
  state.next_observation = r.u64();
  state.t = r.f64();
  const std::uint64_t rows = r.u64();
  if (rows > r.remaining() / 44) throw FormatError("checkpoint is truncated");
  for (std::uint64_t i = 0; i < rows; ++i) {
    TimeSeriesRow row;
    row.t = r.f64();
    row.err_l2 = r.f64();
    row.err_h1 = r.f64();
    row.energy_ref = r.f64();
    row.energy_twin = r.f64();
    row.nudge_active = static_cast<int>(r.u32());
    state.rows.push_back(row);
  }
  for (SpectralField* f : {&state.reference, &state.twin}) {
    const std::uint64_t size = r.u64();
    if (size > r.remaining()) throw FormatError("checkpoint is truncated");
    Snapshot snap = decode_snapshot(r.bytes(size), cfg.L);
    if (snap.fields.size() != 1 || snap.dim != cfg.dim || snap.n != cfg.n) {
      throw FormatError("checkpoint state does not match the configuration grid");
    }
    *f = std::move(snap.fields[0]);
    f->set_solenoidal(true);
  }
  if (r.remaining() != 0) throw FormatError("checkpoint has trailing bytes");
  return state;
}

std::string timeseries_csv(const TimeSeries& series) {
  std::ostringstream out;
  out << timeseries_schema << '\n' << "t,err_l2,err_h1,energy_ref,energy_twin,nudge_active,scheme\n";
  for (const auto& r : series.rows) {
    out << fmt(r.t) << ',' << fmt(r.err_l2) << ',' << fmt(r.err_h1) << ',' << fmt(r.energy_ref) << ','
        << fmt(r.energy_twin) << ',' << r.nudge_active << ',' << series.scheme << '\n';
  }
  if (series.failed) out << "# failed: " << series.failure << '\n';
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "scheme,mu,tau,convergence_time,final_err,failed\n";
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << fmt(r.mu) << ',' << fmt(r.tau) << ','
        << (r.convergence_time ? fmt(*r.convergence_time) : "none") << ',' << fmt(r.final_err) << ','
        << (r.failed ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string spectrum_csv(const Snapshot& snap) {
  std::ostringstream out;
  const bool many = snap.fields.size() > 1;
  out << (many ? "field,shell,energy\n" : "shell,energy\n");
  for (std::size_t f = 0; f < snap.fields.size(); ++f) {
    const auto e = energy_spectrum(snap.fields[f]);
    for (std::size_t s = 0; s < e.size(); ++s) {
      if (many) out << f << ',';
      out << s << ',' << fmt(e[s]) << '\n';
    }
  }
  return out.str();
}

}  // namespace ndas
