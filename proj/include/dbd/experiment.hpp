// SPDX-License-Identifier: Apache-2.0
//
// Experiment harness behind the `dbd` command: run configs, per-seed outputs,
// the scaling benchmark and instance inspection.
//
// Run config (one JSON document, unknown keys rejected):
//
//   {
//     "scenario": {                      // or {"instance": "path/to/instance.json"}
//       "n_tx": 8, "n_rx_radar": 4, "carrier_hz": 28e9, "wavelength_m": 0.011,
//       "element_spacing_wavelengths": 0.5,
//       "targets": {"count": 4, "fov_deg": 60},    // or "angles_deg" + "rcs"
//       "amplitude_std": 0.05, "phase_std_rad": 0.05,
//       "n_comm_rx": 2, "t_symbols": 16, "noise_var": 1e-3, "power_budget": 10,
//       "signal_power_fraction": 0.75, "delta_g_bound_sq": 0.01,
//       "nominal_channel": "scene" | "gaussian", "estimation": "delta" | "full"
//     },
//     "solver": {
//       "rho": 1, "max_iter": 50, "tol": 1e-4, "tol_scaling": "absolute" | "relative",
//       "z_mode": "prox" | "smooth", "eta_z1": 0.5, "eta_z2": 0.5,
//       "legacy_prox_no_dual_shift": false, "init_scale": 0.01, "record_timing": false,
//       "lambda_radar": 1, "lambda_comm": 1, "reg_channel": {...}, "reg_signal": {...}
//     },
//     "seeds": [1, 2, 3],
//     "output_dir": "out",
//     "save_instances": true
//   }
//
// Every field except "seeds" has a default. Relative paths resolve against
// the config file's directory.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dbd/admm.hpp"
#include "dbd/io.hpp"
#include "dbd/jrc.hpp"
#include "dbd/sim.hpp"

namespace dbd {

struct ScenarioConfig {
  /// Solve a saved instance instead of simulating one.
  std::optional<std::filesystem::path> instance_path;
  /// angles_rad empty: targets are drawn per seed with random_scene.
  RadarScene scene;
  std::size_t n_targets = 4;
  double fov_deg = 60.0;
  SimConfig sim;
};

struct RunConfig {
  ScenarioConfig scenario;
  AdmmConfig admm;
  /// Overrides applied to loaded instances; for simulated ones they are
  /// already folded into scenario.sim.
  std::optional<double> lambda_radar;
  std::optional<double> lambda_comm;
  std::optional<RegularizerSpec> reg_channel;
  std::optional<RegularizerSpec> reg_signal;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "out";
  bool save_instances = true;

  void validate() const;
};

RunConfig run_config_from_json(const io::Json& j, const std::filesystem::path& base_dir = {});
io::Json to_json(const RunConfig& config);
/// Parse errors carry the byte offset and line/column; field errors name the field path.
RunConfig load_run_config(const std::filesystem::path& path);

/// The instance solved for `seed`, with overrides applied.
JrcInstance make_instance(const RunConfig& config, std::uint64_t seed);
/// AdmmConfig with init_seed derived from the master seed.
AdmmConfig solver_config(const RunConfig& config, std::uint64_t seed);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool diverged = false;
  std::string error;
  io::Json summary;
};

/// Builds, solves and writes trace_<seed>.csv, summary_<seed>.json and
/// (optionally) instance_<seed>.json. The trace is streamed, so a diverged
/// run leaves the rows produced before the failure. Throws io::IoError.
SeedOutcome run_seed(const RunConfig& config, std::uint64_t seed);

/// Median, quartiles and extremes of each final metric across seeds.
io::Json aggregate(const std::vector<SeedOutcome>& outcomes);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 1;
inline constexpr int divergence = 2;
inline constexpr int io = 3;
}  // namespace exit_code

/// Runs every seed (concurrently) and writes aggregate.json. Returns an exit code.
int run(const RunConfig& config, std::ostream& log, bool quiet = false);

struct BenchConfig {
  std::vector<std::size_t> sizes = {32, 64, 128, 256};
  double t_factor = 1.0;
  int reps = 3;
  int iterations = 5;
  int threads = 1;
  std::uint64_t seed = 1;

  void validate() const;
};

struct BenchPoint {
  std::size_t n = 0;
  std::size_t t = 0;
  std::vector<double> per_iter_s;  // one entry per rep
  double median_s = 0.0;
};

struct BenchReport {
  std::vector<BenchPoint> points;
  double slope = 0.0;
  int threads = 1;
};

/// Median per-iteration time of the generic solver on N x N channels with
/// T = t_factor * N, and the least-squares slope of log time against log N.
BenchReport bench(const BenchConfig& config);
io::Json to_json(const BenchReport& report);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct InstanceReport {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> shapes;
  std::optional<double> tx_power;
  std::optional<double> delta_g_norm_sq;
  std::optional<double> cond_xxh;
  double cond_hhh = 0.0;
};

InstanceReport inspect(const JrcInstance& inst);
std::string format_report(const InstanceReport& report);

/// lambda_max / lambda_min of a Hermitian PSD matrix; +inf when singular.
double hermitian_condition(const ComplexMatrix& a);

}  // namespace dbd
