// SPDX-License-Identifier: Apache-2.0
//
// Joint radar-communication specialization:
//
//   min_{G,X} (lr/2) ||Y_r - G X||^2 + (lc/2) ||Y_c - H X||^2 + lR R(G) + lC C(X)
//
// with H known. With a nominal channel G0 the unknown becomes the bounded
// deviation dG = G - G0 and R is applied to dG ("delta mode"); the channel
// iterate, z1 and mu1 then all live in dG coordinates.

#pragma once

#include <cstdint>
#include <optional>

#include "dbd/admm.hpp"
#include "dbd/matrix.hpp"
#include "dbd/regularizers.hpp"

namespace dbd {

struct GroundTruth {
  ComplexMatrix g_true;
  ComplexMatrix x_true;
  /// g_true - g_nominal when generated from a nominal channel.
  std::optional<ComplexMatrix> delta_g;
};

struct JrcInstance {
  ComplexMatrix y_radar;  // N_r x T
  ComplexMatrix y_comm;   // N_c x T
  ComplexMatrix h_comm;   // N_c x N_t
  std::optional<ComplexMatrix> g_nominal;  // N_r x N_t
  double lambda_radar = 1.0;
  double lambda_comm = 1.0;
  RegularizerSpec reg_channel = RegularizerSpec::squared_frobenius(0.01);
  RegularizerSpec reg_signal = RegularizerSpec::squared_frobenius(0.01);
  /// Used by the spectral-efficiency and radar-MI metrics.
  double noise_var = 1e-3;
  std::optional<GroundTruth> truth;
  /// Master seed the instance was generated from (0 for hand-built ones).
  std::uint64_t seed = 0;

  std::size_t n_tx() const noexcept { return h_comm.cols(); }
  std::size_t n_radar() const noexcept { return y_radar.rows(); }
  std::size_t t() const noexcept { return y_radar.cols(); }
  bool delta_mode() const noexcept { return g_nominal.has_value(); }

  /// Throws ShapeError / ConfigError.
  void validate() const;
};

/// Full radar channel from a channel-coordinate iterate (adds G0 in delta mode).
ComplexMatrix full_channel(const JrcInstance& inst, const ComplexMatrix& channel);

/// Objective at (G, X); in delta mode R is evaluated at G - G0.
double jrc_objective(const JrcInstance& inst, const ComplexMatrix& g, const ComplexMatrix& x);

/// Closed-form G step: (lr Y_eff X^H - mu1 + rho z1)(lr X X^H + rho I)^{-1},
/// Y_eff = Y_r (full mode) or Y_r - G0 X (delta mode, result is dG).
ComplexMatrix update_g_jrc(const JrcInstance& inst, const ComplexMatrix& x,
                           const ComplexMatrix& z1, const ComplexMatrix& mu1, double rho);

/// Closed-form X step with the full radar channel g:
/// (lr G^H G + lc H^H H + rho I)^{-1}(lr G^H Y_r + lc H^H Y_c - mu2 + rho z2).
ComplexMatrix update_x_jrc(const JrcInstance& inst, const ComplexMatrix& g,
                           const ComplexMatrix& z2, const ComplexMatrix& mu2, double rho);

/// Augmented Lagrangian in channel coordinates.
double jrc_lagrangian(const JrcInstance& inst, const AdmmState& state, double rho);

struct JrcResult {
  ComplexMatrix g_est;  // full channel (G0 + dG in delta mode)
  ComplexMatrix x_est;  // projected onto the power ball when reg_signal is one
  AdmmState state;
  std::vector<IterationRecord> trace;
  StopReason stop = StopReason::MaxIter;
};

/// Signal estimate as reported: the iterate, projected onto the power ball
/// when the signal regularizer is a PowerBall.
ComplexMatrix reported_signal(const JrcInstance& inst, const ComplexMatrix& signal);

/// Default start: zero channel (zero dG in delta mode), small random signal.
AdmmState jrc_initial_state(const JrcInstance& inst, const AdmmConfig& config);

/// Stopping scale: sqrt of the summed ||Y||^2 over fidelity terms with a
/// positive weight.
double jrc_data_scale(const JrcInstance& inst);

JrcResult solve_jrc(const JrcInstance& inst, const AdmmConfig& config,
                    const IterationObserver& observer = {},
                    std::optional<AdmmState> init = std::nullopt);

}  // namespace dbd
