// SPDX-License-Identifier: Apache-2.0
//
// dbd run     --config cfg.json [--seed N] [--out DIR] [--quiet]
// dbd bench   [--sizes 32,64,128,256] [--t-factor 1] [--reps 3] [--iterations 5] [--threads 1] [--out report.json]
// dbd inspect instance.json
// dbd inspect --config cfg.json --seed N

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dbd/experiment.hpp"

namespace {

using namespace dbd;

void report_parse_error(const ParseError& e) {
  std::cerr << "parse error at byte " << e.offset() << ": " << e.what() << '\n';
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out, bool quiet) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
  } catch (const io::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return exit_code::io;
  } catch (const ParseError& e) {
    report_parse_error(e);
    return exit_code::config;
  } catch (const ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return exit_code::config;
  }
  if (seed) cfg.seeds = {*seed};
  if (!out.empty()) cfg.output_dir = out;
  const int code = run(cfg, std::cerr, quiet);
  if (!quiet && code == exit_code::ok) {
    std::cerr << "wrote " << cfg.seeds.size() << " run(s) to " << cfg.output_dir.string() << '\n';
  }
  return code;
}

int cmd_bench(const BenchConfig& cfg, const std::string& out) {
  BenchReport report;
  try {
    report = bench(cfg);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return exit_code::config;
  }
  const std::string text = to_json(report).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return exit_code::ok;
  }
  try {
    io::write_file(out, text);
  } catch (const io::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return exit_code::io;
  }
  return exit_code::ok;
}

int cmd_inspect(const std::string& path, const std::string& config_path,
                std::optional<std::uint64_t> seed) {
  try {
    JrcInstance inst;
    if (!path.empty()) {
      inst = io::load_instance(path);
    } else {
      const RunConfig cfg = load_run_config(config_path);
      inst = make_instance(cfg, seed.value_or(cfg.seeds.front()));
    }
    std::cout << format_report(inspect(inst));
    return exit_code::ok;
  } catch (const io::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return exit_code::io;
  } catch (const ParseError& e) {
    report_parse_error(e);
    return exit_code::config;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code::config;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-blind deconvolution solver and JRC experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;

  auto* run_cmd = app.add_subcommand("run", "solve every seed of a config and write traces");
  run_cmd->add_option("--config", config_path, "run config (JSON)")->required();
  run_cmd->add_option("--seed", seed, "run this seed only");
  run_cmd->add_option("--out", out, "output directory (overrides the config)");
  run_cmd->add_flag("--quiet", quiet, "only report failures");

  BenchConfig bench_cfg;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "per-iteration time against problem size");
  bench_cmd->add_option("--sizes", bench_cfg.sizes, "ascending N values")->delimiter(',');
  bench_cmd->add_option("--t-factor", bench_cfg.t_factor, "T = t_factor * N");
  bench_cmd->add_option("--reps", bench_cfg.reps, "timed repetitions per size (>= 3)");
  bench_cmd->add_option("--iterations", bench_cfg.iterations, "ADMM iterations per repetition");
  bench_cmd->add_option("--threads", bench_cfg.threads, "OpenMP threads for the kernels");
  bench_cmd->add_option("--seed", bench_cfg.seed, "data seed");
  bench_cmd->add_option("--out", bench_out, "write the JSON report here instead of stdout");
  bench_cmd->add_flag("--quiet", quiet, "accepted for symmetry");

  std::string instance_path;
  std::string inspect_config;
  std::optional<std::uint64_t> inspect_seed;
  auto* inspect_cmd = app.add_subcommand("inspect", "summarize an instance file");
  inspect_cmd->add_option("instance", instance_path, "instance JSON");
  inspect_cmd->add_option("--config", inspect_config, "build the instance from a run config");
  inspect_cmd->add_option("--seed", inspect_seed, "seed for --config (default: first seed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_code::config;
  }

  if (run_cmd->parsed()) return cmd_run(config_path, seed, out, quiet);
  if (bench_cmd->parsed()) return cmd_bench(bench_cfg, bench_out);
  if (instance_path.empty() == inspect_config.empty()) {
    std::cerr << "inspect: give either an instance file or --config\n";
    return exit_code::config;
  }
  return cmd_inspect(instance_path, inspect_config, inspect_seed);
}
