// SPDX-License-Identifier: Apache-2.0

#include "dbd/sim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dbd/errors.hpp"
#include "dbd/matkit.hpp"
#include "dbd/rng.hpp"

namespace dbd {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

}  // namespace

std::uint64_t sub_seed(std::uint64_t master, SeedStream stream) noexcept {
  return derive_seed(master, static_cast<std::uint64_t>(stream));
}

void RadarScene::validate() const {
  if (n_tx == 0 || n_rx_radar == 0) throw ConfigError("scene: array sizes must be positive");
  if (!(carrier_hz > 0.0) || !(wavelength_m > 0.0)) {
    throw ConfigError("scene: carrier_hz and wavelength_m must be positive");
  }
  const double expected = kSpeedOfLight / carrier_hz;
  if (std::abs(wavelength_m - expected) > 0.05 * expected) {
    throw ConfigError("scene: wavelength_m " + std::to_string(wavelength_m) +
                      " is inconsistent with carrier_hz (c/f = " + std::to_string(expected) + ")");
  }
  if (!(element_spacing_wavelengths > 0.0)) throw ConfigError("scene: element spacing must be > 0");
  if (angles_rad.size() != rcs.size()) {
    throw ConfigError("scene: angles and rcs must have one entry per target");
  }
  for (double a : angles_rad) {
    if (!(std::abs(a) < std::numbers::pi / 2)) {
      throw ConfigError("scene: target angles must lie in (-pi/2, pi/2)");
    }
  }
  if (!(imperfection.amplitude_std >= 0.0) || !(imperfection.phase_std_rad >= 0.0)) {
    throw ConfigError("scene: imperfection scales must be >= 0");
  }
}

RadarScene random_scene(std::size_t n_targets, double fov_rad, std::uint64_t seed) {
  RadarScene scene;
  Rng rng(seed);
  for (std::size_t k = 0; k < n_targets; ++k) {
    scene.angles_rad.push_back(rng.uniform(-fov_rad, fov_rad));
    scene.rcs.push_back(rng.complex_normal());
  }
  return scene;
}

void SimConfig::validate() const {
  if (n_comm_rx == 0 || t_symbols == 0) throw ConfigError("sim: n_comm_rx and t_symbols must be > 0");
  if (!(noise_var >= 0.0)) throw ConfigError("sim: noise_var must be >= 0");
  if (!(power_budget > 0.0)) throw ConfigError("sim: power_budget must be > 0");
  if (!(signal_power_fraction > 0.0) || signal_power_fraction > 1.0) {
    throw ConfigError("sim: signal_power_fraction must be in (0, 1]");
  }
  if (!(delta_g_bound_sq >= 0.0)) throw ConfigError("sim: delta_g_bound_sq must be >= 0");
  if (!(lambda_radar >= 0.0) || !(lambda_comm >= 0.0) || !(lambda_radar + lambda_comm > 0.0)) {
    throw ConfigError("sim: fidelity weights must be >= 0 with a positive sum");
  }
  channel_regularizer().validate();
  reg_signal.validate();
}

RegularizerSpec SimConfig::channel_regularizer() const {
  if (reg_channel) return *reg_channel;
  if (mode == EstimationMode::Delta) return RegularizerSpec::frobenius_ball(std::sqrt(delta_g_bound_sq));
  return RegularizerSpec::squared_frobenius(0.01);
}

ComplexMatrix steering_vector(std::size_t n_elems, double angle_rad, double spacing_wavelengths,
                              const SteeringImperfection& imperfection, std::uint64_t seed) {
  ComplexMatrix a(n_elems, 1);
  Rng rng(seed);
  const double phase_step = 2.0 * std::numbers::pi * spacing_wavelengths * std::sin(angle_rad);
  for (std::size_t k = 0; k < n_elems; ++k) {
    const cplx ideal = std::polar(1.0, phase_step * static_cast<double>(k));
    const double amp_err = imperfection.amplitude_std * rng.normal();
    const double phase_err = imperfection.phase_std_rad * rng.normal();
    if (imperfection.amplitude_std == 0.0 && imperfection.phase_std_rad == 0.0) {
      a(k, 0) = ideal;
    } else {
      a(k, 0) = ideal * std::polar(1.0 + amp_err, phase_err);
    }
  }
  return a;
}

ComplexMatrix gen_radar_channel(const RadarScene& scene, std::uint64_t seed) {
  scene.validate();
  ComplexMatrix g(scene.n_rx_radar, scene.n_tx);
  for (std::size_t k = 0; k < scene.n_targets(); ++k) {
    const std::uint64_t target_seed = derive_seed(seed, k);
    const ComplexMatrix a_rx =
        steering_vector(scene.n_rx_radar, scene.angles_rad[k], scene.element_spacing_wavelengths,
                        scene.imperfection, derive_seed(target_seed, 0));
    const ComplexMatrix a_tx =
        steering_vector(scene.n_tx, scene.angles_rad[k], scene.element_spacing_wavelengths,
                        scene.imperfection, derive_seed(target_seed, 1));
    g += scene.rcs[k] * matmul_bh(a_rx, a_tx);
  }
  return g;
}

PerturbedChannel perturb_channel(const ComplexMatrix& g0, double bound_sq, std::uint64_t seed) {
  if (!(bound_sq >= 0.0)) throw std::invalid_argument("perturb_channel: bound_sq must be >= 0");
  if (bound_sq == 0.0) return {g0, ComplexMatrix(g0.rows(), g0.cols())};
  Rng rng(seed);
  ComplexMatrix d(g0.rows(), g0.cols());
  for (cplx& v : d.data()) v = rng.complex_normal();
  const double target = rng.uniform_open_low() * bound_sq;
  d *= std::sqrt(target / frob_norm_sq(d));
  while (frob_norm_sq(d) > bound_sq) d *= std::nextafter(1.0, 0.0);
  return {g0 + d, std::move(d)};
}

ComplexMatrix gen_comm_channel(std::size_t n_rx, std::size_t n_tx, std::uint64_t seed) {
  return randn_complex(n_rx, n_tx, seed);
}

ComplexMatrix gen_signal(std::size_t n_tx, std::size_t t, double power_budget, std::uint64_t seed,
                         double power_fraction) {
  if (!(power_budget > 0.0)) throw std::invalid_argument("gen_signal: power_budget must be > 0");
  ComplexMatrix x = randn_complex(n_tx, t, seed);
  const double target = power_fraction * power_budget;
  x *= std::sqrt(target / frob_norm_sq(x));
  while (frob_norm_sq(x) > power_budget) x *= std::nextafter(1.0, 0.0);
  return x;
}

ComplexMatrix observe(const ComplexMatrix& channel, const ComplexMatrix& x, double noise_var,
                      std::uint64_t seed) {
  if (!(noise_var >= 0.0)) throw std::invalid_argument("observe: noise_var must be >= 0");
  ComplexMatrix y = matmul(channel, x);
  if (noise_var == 0.0) return y;
  y += std::sqrt(noise_var) * randn_complex(y.rows(), y.cols(), seed);
  return y;
}

JrcInstance build_instance(const RadarScene& scene, const SimConfig& config) {
  scene.validate();
  config.validate();
  const std::uint64_t master = config.seed;

  ComplexMatrix g0 =
      config.nominal == NominalChannel::Scene
          ? gen_radar_channel(scene, sub_seed(master, SeedStream::Steering))
          : randn_complex(scene.n_rx_radar, scene.n_tx, sub_seed(master, SeedStream::GaussianNominal));
  PerturbedChannel pert =
      perturb_channel(g0, config.delta_g_bound_sq, sub_seed(master, SeedStream::DeltaG));
  ComplexMatrix h = gen_comm_channel(config.n_comm_rx, scene.n_tx,
                                     sub_seed(master, SeedStream::CommChannel));
  ComplexMatrix x = gen_signal(scene.n_tx, config.t_symbols, config.power_budget,
                               sub_seed(master, SeedStream::Signal), config.signal_power_fraction);

  JrcInstance inst;
  inst.y_radar = observe(pert.g_true, x, config.noise_var, sub_seed(master, SeedStream::RadarNoise));
  inst.y_comm = observe(h, x, config.noise_var, sub_seed(master, SeedStream::CommNoise));
  inst.h_comm = std::move(h);
  if (config.mode == EstimationMode::Delta) inst.g_nominal = std::move(g0);
  inst.lambda_radar = config.lambda_radar;
  inst.lambda_comm = config.lambda_comm;
  inst.reg_channel = config.channel_regularizer();
  inst.reg_signal = config.reg_signal;
  inst.noise_var = config.noise_var;
  inst.truth = GroundTruth{std::move(pert.g_true), std::move(x), std::move(pert.delta_g)};
  inst.seed = master;
  return inst;
}

}  // namespace dbd
