// SPDX-License-Identifier: Apache-2.0

#include "dbd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "dbd/kernels.hpp"
#include "dbd/matkit.hpp"
#include "dbd/metrics.hpp"
#include "dbd/rng.hpp"

namespace dbd {

namespace {

using io::Json;

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

/// Reads an object field by field and rejects keys that were never asked for.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(label() + ": expected an object");
  }

  std::string at(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const Json* find(const std::string& key) {
    known_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  bool has(const std::string& key) { return find(key) != nullptr; }

  void number(const std::string& key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(at(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(at(key) + ": expected an integer");
      if (std::is_unsigned_v<Int> && !v->is_number_unsigned()) {
        throw ConfigError(at(key) + ": expected a non-negative integer");
      }
      out = v->get<Int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(at(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }

  template <class E>
  void choice(const std::string& key, E& out,
              std::initializer_list<std::pair<const char*, E>> options) {
    const Json* v = find(key);
    if (!v) return;
    std::string allowed;
    if (v->is_string()) {
      for (const auto& [name, value] : options) {
        if (*v == name) {
          out = value;
          return;
        }
      }
    }
    for (const auto& [name, value] : options) allowed += std::string(allowed.empty() ? "" : ", ") + name;
    throw ConfigError(at(key) + ": expected one of " + allowed);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!known_.contains(key)) throw ConfigError(at(key) + ": unknown field");
    }
  }

 private:
  std::string label() const { return path_.empty() ? "config" : path_; }

  const Json& j_;
  std::string path_;
  std::set<std::string> known_;
};

void parse_scenario(const Json& j, const std::filesystem::path& base_dir, ScenarioConfig& sc) {
  Fields f(j, "scenario");
  if (const Json* inst = f.find("instance")) {
    if (!inst->is_string()) throw ConfigError("scenario.instance: expected a path string");
    if (j.size() != 1) {
      throw ConfigError("scenario: \"instance\" cannot be combined with simulation fields");
    }
    sc.instance_path = base_dir / inst->get<std::string>();
    return;
  }
  RadarScene& scene = sc.scene;
  SimConfig& sim = sc.sim;
  f.integer("n_tx", scene.n_tx);
  f.integer("n_rx_radar", scene.n_rx_radar);
  f.number("carrier_hz", scene.carrier_hz);
  f.number("wavelength_m", scene.wavelength_m);
  f.number("element_spacing_wavelengths", scene.element_spacing_wavelengths);
  f.number("amplitude_std", scene.imperfection.amplitude_std);
  f.number("phase_std_rad", scene.imperfection.phase_std_rad);

  const Json* targets = f.find("targets");
  const Json* angles = f.find("angles_deg");
  const Json* rcs = f.find("rcs");
  if (targets && (angles || rcs)) {
    throw ConfigError("scenario: give either \"targets\" or \"angles_deg\" + \"rcs\", not both");
  }
  if (targets) {
    Fields t(*targets, "scenario.targets");
    t.integer("count", sc.n_targets);
    t.number("fov_deg", sc.fov_deg);
    t.finish();
  }
  if (angles || rcs) {
    if (!angles || !rcs) throw ConfigError("scenario: \"angles_deg\" and \"rcs\" go together");
    if (!angles->is_array()) throw ConfigError("scenario.angles_deg: expected an array");
    if (!rcs->is_array() || rcs->size() != angles->size()) {
      throw ConfigError("scenario.rcs: expected one [re, im] pair per angle");
    }
    for (std::size_t k = 0; k < angles->size(); ++k) {
      const Json& a = (*angles)[k];
      const Json& r = (*rcs)[k];
      const std::string idx = "[" + std::to_string(k) + "]";
      if (!a.is_number()) throw ConfigError("scenario.angles_deg" + idx + ": expected a number");
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
        throw ConfigError("scenario.rcs" + idx + ": expected [re, im]");
      }
      scene.angles_rad.push_back(a.get<double>() / kDegPerRad);
      scene.rcs.emplace_back(r[0].get<double>(), r[1].get<double>());
    }
  }

  f.integer("n_comm_rx", sim.n_comm_rx);
  f.integer("t_symbols", sim.t_symbols);
  f.number("noise_var", sim.noise_var);
  f.number("power_budget", sim.power_budget);
  f.number("signal_power_fraction", sim.signal_power_fraction);
  f.number("delta_g_bound_sq", sim.delta_g_bound_sq);
  f.choice("nominal_channel", sim.nominal,
           {{"scene", NominalChannel::Scene}, {"gaussian", NominalChannel::Gaussian}});
  f.choice("estimation", sim.mode, {{"delta", EstimationMode::Delta}, {"full", EstimationMode::Full}});
  f.finish();
}

void parse_solver(const Json& j, RunConfig& rc) {
  Fields f(j, "solver");
  AdmmConfig& a = rc.admm;
  f.number("rho", a.rho);
  f.integer("max_iter", a.max_iter);
  f.number("tol", a.tol);
  f.choice("tol_scaling", a.tol_scaling,
           {{"absolute", TolScaling::Absolute}, {"relative", TolScaling::Relative}});
  f.choice("z_mode", a.z_mode, {{"prox", ZMode::Prox}, {"smooth", ZMode::Smooth}});
  f.number("eta_z1", a.eta_z1);
  f.number("eta_z2", a.eta_z2);
  f.boolean("legacy_prox_no_dual_shift", a.legacy_prox_no_dual_shift);
  f.number("init_scale", a.init_scale);
  f.boolean("record_timing", a.record_timing);
  if (f.has("lambda_radar")) {
    double v = 0.0;
    f.number("lambda_radar", v);
    rc.lambda_radar = v;
  }
  if (f.has("lambda_comm")) {
    double v = 0.0;
    f.number("lambda_comm", v);
    rc.lambda_comm = v;
  }
  if (const Json* r = f.find("reg_channel")) rc.reg_channel = io::regularizer_from_json(*r, "solver.reg_channel");
  if (const Json* r = f.find("reg_signal")) rc.reg_signal = io::regularizer_from_json(*r, "solver.reg_signal");
  f.finish();
}

Json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json record_json(const IterationRecord& rec) {
  return Json{
      {"iter", rec.iter},
      {"r1", rec.r1},
      {"r2", rec.r2},
      {"s1", rec.s1},
      {"s2", rec.s2},
      {"objective", std::isfinite(rec.objective) ? Json(rec.objective) : Json("infeasible")},
      {"sinr_db", number_or_string(rec.sinr_db)},
      {"spectral_eff_bits", number_or_string(rec.spectral_eff_bits)},
      {"radar_mi_bits", number_or_string(rec.radar_mi_bits)},
      {"tx_power", rec.tx_power},
      {"elapsed_s", rec.elapsed_s},
  };
}

std::filesystem::path seed_file(const RunConfig& rc, const char* stem, std::uint64_t seed,
                                const char* ext) {
  return rc.output_dir / (std::string(stem) + "_" + std::to_string(seed) + ext);
}

/// Linear-interpolation quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return quantile(v, 0.5);
}

}  // namespace

void RunConfig::validate() const {
  if (seeds.empty()) throw ConfigError("seeds: at least one seed is required");
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) throw ConfigError("seeds: duplicate seed");
  if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  if (!scenario.instance_path) {
    if (!(scenario.fov_deg > 0.0) || !(scenario.fov_deg < 90.0)) {
      throw ConfigError("scenario.targets.fov_deg: must be in (0, 90)");
    }
    try {
      scenario.scene.validate();
      scenario.sim.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("scenario: ") + e.what());
    }
  }
  if (lambda_radar && !(*lambda_radar >= 0.0)) throw ConfigError("solver.lambda_radar: must be >= 0");
  if (lambda_comm && !(*lambda_comm >= 0.0)) throw ConfigError("solver.lambda_comm: must be >= 0");
  const RegularizerSpec rch = reg_channel.value_or(scenario.sim.channel_regularizer());
  const RegularizerSpec rsg = reg_signal.value_or(scenario.sim.reg_signal);
  try {
    admm.validate(rch, rsg);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
}

RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  RunConfig rc;
  Fields f(j, "");
  if (const Json* s = f.find("scenario")) parse_scenario(*s, base_dir, rc.scenario);
  if (const Json* s = f.find("solver")) parse_solver(*s, rc);

  const Json* seeds = f.find("seeds");
  if (!seeds) throw ConfigError("seeds: missing field");
  if (!seeds->is_array()) throw ConfigError("seeds: expected an array of non-negative integers");
  for (std::size_t k = 0; k < seeds->size(); ++k) {
    if (!(*seeds)[k].is_number_unsigned()) {
      throw ConfigError("seeds[" + std::to_string(k) + "]: expected a non-negative integer");
    }
    rc.seeds.push_back((*seeds)[k].get<std::uint64_t>());
  }
  if (const Json* out = f.find("output_dir")) {
    if (!out->is_string()) throw ConfigError("output_dir: expected a path string");
    rc.output_dir = base_dir / out->get<std::string>();
  } else {
    rc.output_dir = base_dir / rc.output_dir;
  }
  f.boolean("save_instances", rc.save_instances);
  f.finish();

  SimConfig& sim = rc.scenario.sim;
  if (rc.lambda_radar) sim.lambda_radar = *rc.lambda_radar;
  if (rc.lambda_comm) sim.lambda_comm = *rc.lambda_comm;
  if (rc.reg_channel) sim.reg_channel = *rc.reg_channel;
  if (rc.reg_signal) sim.reg_signal = *rc.reg_signal;
  rc.validate();
  return rc;
}

Json to_json(const RunConfig& rc) {
  Json scenario;
  if (rc.scenario.instance_path) {
    scenario = Json{{"instance", rc.scenario.instance_path->generic_string()}};
  } else {
    const RadarScene& s = rc.scenario.scene;
    const SimConfig& sim = rc.scenario.sim;
    scenario = Json{
        {"n_tx", s.n_tx},
        {"n_rx_radar", s.n_rx_radar},
        {"carrier_hz", s.carrier_hz},
        {"wavelength_m", s.wavelength_m},
        {"element_spacing_wavelengths", s.element_spacing_wavelengths},
        {"amplitude_std", s.imperfection.amplitude_std},
        {"phase_std_rad", s.imperfection.phase_std_rad},
    };
    if (s.angles_rad.empty()) {
      scenario["targets"] = Json{{"count", rc.scenario.n_targets}, {"fov_deg", rc.scenario.fov_deg}};
    } else {
      Json angles = Json::array();
      Json rcs = Json::array();
      for (std::size_t k = 0; k < s.angles_rad.size(); ++k) {
        angles.push_back(s.angles_rad[k] * kDegPerRad);
        rcs.push_back(Json::array({s.rcs[k].real(), s.rcs[k].imag()}));
      }
      scenario["angles_deg"] = std::move(angles);
      scenario["rcs"] = std::move(rcs);
    }
    scenario["n_comm_rx"] = sim.n_comm_rx;
    scenario["t_symbols"] = sim.t_symbols;
    scenario["noise_var"] = sim.noise_var;
    scenario["power_budget"] = sim.power_budget;
    scenario["signal_power_fraction"] = sim.signal_power_fraction;
    scenario["delta_g_bound_sq"] = sim.delta_g_bound_sq;
    scenario["nominal_channel"] = sim.nominal == NominalChannel::Scene ? "scene" : "gaussian";
    scenario["estimation"] = sim.mode == EstimationMode::Delta ? "delta" : "full";
  }

  const AdmmConfig& a = rc.admm;
  Json solver{
      {"rho", a.rho},
      {"max_iter", a.max_iter},
      {"tol", a.tol},
      {"tol_scaling", to_string(a.tol_scaling)},
      {"z_mode", to_string(a.z_mode)},
      {"eta_z1", a.eta_z1},
      {"eta_z2", a.eta_z2},
      {"legacy_prox_no_dual_shift", a.legacy_prox_no_dual_shift},
      {"init_scale", a.init_scale},
      {"record_timing", a.record_timing},
  };
  if (rc.scenario.instance_path) {
    if (rc.lambda_radar) solver["lambda_radar"] = *rc.lambda_radar;
    if (rc.lambda_comm) solver["lambda_comm"] = *rc.lambda_comm;
    if (rc.reg_channel) solver["reg_channel"] = io::to_json(*rc.reg_channel);
    if (rc.reg_signal) solver["reg_signal"] = io::to_json(*rc.reg_signal);
  } else {
    const SimConfig& sim = rc.scenario.sim;
    solver["lambda_radar"] = sim.lambda_radar;
    solver["lambda_comm"] = sim.lambda_comm;
    solver["reg_channel"] = io::to_json(sim.channel_regularizer());
    solver["reg_signal"] = io::to_json(sim.reg_signal);
  }

  return Json{
      {"scenario", std::move(scenario)},
      {"solver", std::move(solver)},
      {"seeds", rc.seeds},
      {"output_dir", rc.output_dir.generic_string()},
      {"save_instances", rc.save_instances},
  };
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const Json j = io::parse(io::read_file(path), path.string());
  return run_config_from_json(j, path.parent_path());
}

JrcInstance make_instance(const RunConfig& rc, std::uint64_t seed) {
  if (rc.scenario.instance_path) {
    JrcInstance inst = io::load_instance(*rc.scenario.instance_path);
    if (rc.lambda_radar) inst.lambda_radar = *rc.lambda_radar;
    if (rc.lambda_comm) inst.lambda_comm = *rc.lambda_comm;
    if (rc.reg_channel) inst.reg_channel = *rc.reg_channel;
    if (rc.reg_signal) inst.reg_signal = *rc.reg_signal;
    inst.validate();
    return inst;
  }
  RadarScene scene = rc.scenario.scene;
  if (scene.angles_rad.empty()) {
    const RadarScene drawn = random_scene(rc.scenario.n_targets, rc.scenario.fov_deg / kDegPerRad,
                                          sub_seed(seed, SeedStream::Scene));
    scene.angles_rad = drawn.angles_rad;
    scene.rcs = drawn.rcs;
  }
  SimConfig sim = rc.scenario.sim;
  sim.seed = seed;
  return build_instance(scene, sim);
}

AdmmConfig solver_config(const RunConfig& rc, std::uint64_t seed) {
  AdmmConfig cfg = rc.admm;
  cfg.init_seed = sub_seed(seed, SeedStream::SolverInit);
  return cfg;
}

SeedOutcome run_seed(const RunConfig& rc, std::uint64_t seed) {
  SeedOutcome out;
  out.seed = seed;
  const JrcInstance inst = make_instance(rc, seed);
  if (rc.save_instances) io::save_instance(inst, seed_file(rc, "instance", seed, ".json"));

  const std::filesystem::path trace_path = seed_file(rc, "trace", seed, ".csv");
  std::ofstream trace(trace_path, std::ios::binary | std::ios::trunc);
  if (!trace) throw io::IoError("cannot write " + trace_path.string());
  trace << csv_header() << '\n';

  std::vector<IterationRecord> records;
  auto observer = [&](const IterationRecord& rec) {
    records.push_back(rec);
    trace << to_csv_row(rec) << '\n';
    trace.flush();
  };

  Json summary{{"seed", seed}};
  std::optional<JrcResult> result;
  try {
    result = solve_jrc(inst, solver_config(rc, seed), observer);
  } catch (const DivergenceError& e) {
    out.diverged = true;
    out.error = e.what();
  } catch (const IllConditionedError& e) {
    out.diverged = true;
    out.error = e.what();
  }
  trace.close();
  if (!trace) throw io::IoError("error writing " + trace_path.string());

  summary["stop_reason"] = result ? Json(to_string(result->stop)) : Json("diverged");
  summary["iterations"] = records.size();
  if (out.diverged) summary["error"] = out.error;
  summary["final"] = records.empty() ? Json(nullptr) : record_json(records.back());
  if (result && inst.truth) {
    const ChannelError ge = channel_error(result->g_est, inst.truth->g_true);
    const ChannelError xe = channel_error(result->x_est, inst.truth->x_true);
    summary["errors"] = Json{
        {"channel_abs", ge.absolute},
        {"channel_rel", number_or_string(ge.relative)},
        {"signal_abs", xe.absolute},
        {"signal_rel", number_or_string(xe.relative)},
    };
  }
  summary["config"] = to_json(rc);
  io::write_file(seed_file(rc, "summary", seed, ".json"), summary.dump(2) + "\n");
  out.summary = std::move(summary);
  return out;
}

Json aggregate(const std::vector<SeedOutcome>& outcomes) {
  const std::pair<const char*, Json::json_pointer> fields[] = {
      {"channel_abs", Json::json_pointer("/errors/channel_abs")},
      {"signal_abs", Json::json_pointer("/errors/signal_abs")},
      {"sinr_db", Json::json_pointer("/final/sinr_db")},
      {"spectral_eff_bits", Json::json_pointer("/final/spectral_eff_bits")},
      {"radar_mi_bits", Json::json_pointer("/final/radar_mi_bits")},
      {"tx_power", Json::json_pointer("/final/tx_power")},
      {"objective", Json::json_pointer("/final/objective")},
      {"iterations", Json::json_pointer("/iterations")},
  };

  Json stops = Json::object();
  Json diverged = Json::array();
  for (const SeedOutcome& o : outcomes) {
    const std::string reason = o.summary.value("stop_reason", "diverged");
    stops[reason] = stops.value(reason, 0) + 1;
    if (o.diverged) diverged.push_back(o.seed);
  }

  Json metrics = Json::object();
  for (const auto& [name, ptr] : fields) {
    std::vector<double> values;
    for (const SeedOutcome& o : outcomes) {
      if (o.diverged || !o.summary.contains(ptr)) continue;
      const Json& v = o.summary.at(ptr);
      if (v.is_number()) values.push_back(v.get<double>());
    }
    if (values.empty()) continue;
    std::sort(values.begin(), values.end());
    const double q1 = quantile(values, 0.25);
    const double q3 = quantile(values, 0.75);
    metrics[name] = Json{
        {"n", values.size()},  {"median", quantile(values, 0.5)},
        {"q1", q1},            {"q3", q3},
        {"iqr", q3 - q1},      {"min", values.front()},
        {"max", values.back()},
    };
  }
  return Json{{"seeds", outcomes.size()},
              {"stop_reasons", std::move(stops)},
              {"diverged", std::move(diverged)},
              {"metrics", std::move(metrics)}};
}

int run(const RunConfig& rc, std::ostream& log, bool quiet) {
  try {
    rc.validate();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_code::config;
  }
  std::error_code ec;
  std::filesystem::create_directories(rc.output_dir, ec);
  if (ec) {
    log << "i/o error: cannot create " << rc.output_dir.string() << ": " << ec.message() << '\n';
    return exit_code::io;
  }

  const auto n = static_cast<std::ptrdiff_t>(rc.seeds.size());
  std::vector<SeedOutcome> outcomes(rc.seeds.size());
  std::vector<int> status(rc.seeds.size(), exit_code::ok);
  std::vector<std::string> messages(rc.seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::uint64_t seed = rc.seeds[static_cast<std::size_t>(i)];
    auto& out = outcomes[static_cast<std::size_t>(i)];
    auto& st = status[static_cast<std::size_t>(i)];
    auto& msg = messages[static_cast<std::size_t>(i)];
    out.seed = seed;
    try {
      out = run_seed(rc, seed);
      if (out.diverged) {
        st = exit_code::divergence;
        msg = out.error;
      }
    } catch (const io::IoError& e) {
      st = exit_code::io;
      msg = e.what();
    } catch (const ParseError& e) {
      st = exit_code::config;
      msg = e.what();
    } catch (const Error& e) {
      st = exit_code::config;
      msg = e.what();
    }
  }

  int code = exit_code::ok;
  for (std::size_t i = 0; i < rc.seeds.size(); ++i) {
    const int st = status[i];
    if (st != exit_code::ok) {
      const char* kind = st == exit_code::divergence ? "diverged" : st == exit_code::io ? "i/o error" : "error";
      log << "seed " << rc.seeds[i] << ": " << kind << ": " << messages[i] << '\n';
    } else if (!quiet) {
      const Json& s = outcomes[i].summary;
      log << "seed " << rc.seeds[i] << ": " << s["stop_reason"].get<std::string>() << " after "
          << s["iterations"] << " iterations";
      if (s.contains("errors")) {
        log << ", channel error " << s["errors"]["channel_abs"] << ", signal error "
            << s["errors"]["signal_abs"];
      }
      log << '\n';
    }
    // config > i/o > divergence
    auto rank = [](int c) { return c == exit_code::config ? 3 : c == exit_code::io ? 2 : c == exit_code::divergence ? 1 : 0; };
    if (rank(st) > rank(code)) code = st;
  }

  std::vector<SeedOutcome> written;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (status[i] == exit_code::ok || status[i] == exit_code::divergence) written.push_back(outcomes[i]);
  }
  try {
    io::write_file(rc.output_dir / "aggregate.json", aggregate(written).dump(2) + "\n");
  } catch (const io::IoError& e) {
    log << "i/o error: " << e.what() << '\n';
    if (code == exit_code::ok) code = exit_code::io;
  }
  return code;
}

void BenchConfig::validate() const {
  if (sizes.empty()) throw ConfigError("bench: sizes must not be empty");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] == 0) throw ConfigError("bench: sizes must be positive");
    if (k > 0 && sizes[k] <= sizes[k - 1]) throw ConfigError("bench: sizes must be ascending");
  }
  if (!(t_factor > 0.0)) throw ConfigError("bench: t_factor must be > 0");
  if (reps < 3) throw ConfigError("bench: reps must be >= 3");
  if (iterations < 1) throw ConfigError("bench: iterations must be >= 1");
  if (threads < 1) throw ConfigError("bench: threads must be >= 1");
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two matching points");
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

BenchReport bench(const BenchConfig& config) {
  config.validate();
  const int saved_threads = kernels::max_threads();
  kernels::set_threads(config.threads);

  BenchReport report;
  report.threads = config.threads;
  for (std::size_t n : config.sizes) {
    const auto t = static_cast<std::size_t>(
        std::max(1.0, std::round(config.t_factor * static_cast<double>(n))));
    BlindProblem problem{randn_complex(n, t, derive_seed(config.seed, n)), n, 2.0,
                         RegularizerSpec::squared_frobenius(0.01),
                         RegularizerSpec::squared_frobenius(0.01), 0.0};
    AdmmConfig cfg;
    cfg.max_iter = config.iterations;
    cfg.tol = std::numeric_limits<double>::denorm_min();  // never converges early
    cfg.init_seed = derive_seed(config.seed, n + 1);

    BenchPoint point;
    point.n = n;
    point.t = t;
    solve(problem, cfg);  // warm-up
    for (int r = 0; r < config.reps; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const AdmmResult res = solve(problem, cfg);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      point.per_iter_s.push_back(secs / static_cast<double>(res.trace.size()));
    }
    point.median_s = median(point.per_iter_s);
    report.points.push_back(std::move(point));
  }
  kernels::set_threads(saved_threads);

  if (report.points.size() >= 2) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const BenchPoint& p : report.points) {
      xs.push_back(static_cast<double>(p.n));
      ys.push_back(p.median_s);
    }
    report.slope = loglog_slope(xs, ys);
  } else {
    report.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

Json to_json(const BenchReport& report) {
  Json points = Json::array();
  for (const BenchPoint& p : report.points) {
    points.push_back(Json{{"n", p.n}, {"t", p.t}, {"median_s", p.median_s}, {"per_iter_s", p.per_iter_s}});
  }
  return Json{{"threads", report.threads},
              {"points", std::move(points)},
              {"slope", std::isfinite(report.slope) ? Json(report.slope) : Json(nullptr)}};
}

double hermitian_condition(const ComplexMatrix& a) {
  const std::vector<double> ev = hermitian_eigenvalues(a);
  if (ev.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double hi = ev.back();
  const double lo = ev.front();
  // eigenvalues below the solver's resolution count as zero
  const double floor = hi * static_cast<double>(ev.size()) * std::numeric_limits<double>::epsilon();
  if (!(hi > 0.0) || lo <= floor) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

InstanceReport inspect(const JrcInstance& inst) {
  InstanceReport r;
  r.seed = inst.seed;
  auto shape = [](const ComplexMatrix& m) { return std::pair{m.rows(), m.cols()}; };
  r.shapes.emplace_back("y_radar", shape(inst.y_radar));
  r.shapes.emplace_back("y_comm", shape(inst.y_comm));
  r.shapes.emplace_back("h_comm", shape(inst.h_comm));
  if (inst.g_nominal) r.shapes.emplace_back("g_nominal", shape(*inst.g_nominal));
  if (inst.truth) {
    r.shapes.emplace_back("g_true", shape(inst.truth->g_true));
    r.shapes.emplace_back("x_true", shape(inst.truth->x_true));
    r.tx_power = tx_power(inst.truth->x_true);
    r.cond_xxh = hermitian_condition(matmul_bh(inst.truth->x_true, inst.truth->x_true));
    if (inst.truth->delta_g) r.delta_g_norm_sq = frob_norm_sq(*inst.truth->delta_g);
  }
  r.cond_hhh = hermitian_condition(matmul_ah(inst.h_comm, inst.h_comm));
  return r;
}

std::string format_report(const InstanceReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "seed: " << r.seed << '\n';
  for (const auto& [name, dims] : r.shapes) {
    os << name << ": " << dims.first << "x" << dims.second << '\n';
  }
  auto opt = [&](const char* name, const std::optional<double>& v) {
    os << name << ": ";
    if (v) {
      os << *v;
    } else {
      os << "n/a";
    }
    os << '\n';
  };
  opt("tx_power", r.tx_power);
  opt("delta_g_norm_sq", r.delta_g_norm_sq);
  opt("cond_xxh", r.cond_xxh);
  os << "cond_hhh: " << r.cond_hhh << '\n';
  return os.str();
}

}  // namespace dbd
