// SPDX-License-Identifier: Apache-2.0
//
// mmWave JRC scenario generator: an 8-transmit / 4-receive radar array at
// 28 GHz looking at a handful of point targets, a 2-antenna Gaussian comm
// link, and a power-scaled Gaussian transmit block.
//
// All randomness derives from SimConfig::seed through derive_seed with the
// fixed stream ids in SeedStream, so an instance is reproduced exactly from
// its configuration and master seed.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dbd/jrc.hpp"
#include "dbd/matrix.hpp"
#include "dbd/regularizers.hpp"

namespace dbd {

enum class SeedStream : std::uint64_t {
  Scene = 0,         // target angles and RCS
  Steering = 1,      // per-target steering imperfections
  DeltaG = 2,
  CommChannel = 3,
  Signal = 4,
  RadarNoise = 5,
  CommNoise = 6,
  SolverInit = 7,
  GaussianNominal = 8,
};

std::uint64_t sub_seed(std::uint64_t master, SeedStream stream) noexcept;

struct SteeringImperfection {
  double amplitude_std = 0.05;    // relative, per element
  double phase_std_rad = 0.05;
};

struct RadarScene {
  std::size_t n_tx = 8;
  std::size_t n_rx_radar = 4;
  double carrier_hz = 28e9;
  double wavelength_m = 0.011;
  double element_spacing_wavelengths = 0.5;
  std::vector<double> angles_rad;
  std::vector<cplx> rcs;
  SteeringImperfection imperfection;

  std::size_t n_targets() const noexcept { return angles_rad.size(); }
  /// Throws ConfigError.
  void validate() const;
};

/// Default array with n_targets targets at angles uniform on (-fov, fov) and
/// unit-variance complex Gaussian RCS.
RadarScene random_scene(std::size_t n_targets, double fov_rad, std::uint64_t seed);

enum class NominalChannel { Scene, Gaussian };
enum class EstimationMode { Delta, Full };

struct SimConfig {
  std::size_t n_comm_rx = 2;
  std::size_t t_symbols = 16;
  double noise_var = 1e-3;
  double power_budget = 10.0;
  /// Tr(X X^H) of the generated signal as a fraction of the budget.
  double signal_power_fraction = 0.75;
  double delta_g_bound_sq = 1e-2;
  std::uint64_t seed = 0;
  NominalChannel nominal = NominalChannel::Scene;
  EstimationMode mode = EstimationMode::Delta;
  double lambda_radar = 1.0;
  double lambda_comm = 1.0;
  /// Unset: a Frobenius ball of radius sqrt(delta_g_bound_sq) on dG in delta
  /// mode, squared Frobenius with weight 0.01 on G in full mode.
  std::optional<RegularizerSpec> reg_channel;
  RegularizerSpec reg_signal = RegularizerSpec::squared_frobenius(0.01);

  RegularizerSpec channel_regularizer() const;
  void validate() const;
};

/// Ideal entry k is exp(i 2 pi d k sin(angle)); each element is then scaled by
/// (1 + a_k) exp(i phi_k) with a_k, phi_k zero-mean Gaussians of the
/// configured scales.
ComplexMatrix steering_vector(std::size_t n_elems, double angle_rad, double spacing_wavelengths,
                              const SteeringImperfection& imperfection, std::uint64_t seed);

/// sum_k rcs_k a_rx(theta_k) a_tx(theta_k)^H.
ComplexMatrix gen_radar_channel(const RadarScene& scene, std::uint64_t seed);

struct PerturbedChannel {
  ComplexMatrix g_true;
  ComplexMatrix delta_g;
};

/// delta_g is Gaussian, rescaled to ||delta_g||_F^2 = u * bound_sq with
/// u uniform on (0, 1]; never exceeds bound_sq.
PerturbedChannel perturb_channel(const ComplexMatrix& g0, double bound_sq, std::uint64_t seed);

ComplexMatrix gen_comm_channel(std::size_t n_rx, std::size_t n_tx, std::uint64_t seed);

/// Gaussian block scaled to Tr(X X^H) = power_fraction * power_budget.
ComplexMatrix gen_signal(std::size_t n_tx, std::size_t t, double power_budget,
                         std::uint64_t seed, double power_fraction = 0.75);

/// channel * x + AWGN with per-entry variance noise_var.
ComplexMatrix observe(const ComplexMatrix& channel, const ComplexMatrix& x, double noise_var,
                      std::uint64_t seed);

/// Builds the full instance. In Delta mode g_nominal is set; in Full mode the
/// solver sees no nominal channel.
JrcInstance build_instance(const RadarScene& scene, const SimConfig& config);

}  // namespace dbd
