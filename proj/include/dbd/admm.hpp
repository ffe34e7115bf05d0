// SPDX-License-Identifier: Apache-2.0
//
// ADMM for blind deconvolution Y ~ H X. The problem
//
//   min_{H,X}  (c/2) ||Y - H X||_F^2 + lambda_R R(H) + lambda_S S(X)
//
// is split with consensus copies Z1 = H, Z2 = X and solved on the augmented
// Lagrangian
//
//   L = (c/2) ||Y - H X||^2 + lambda_R R(Z1) + lambda_S S(Z2)
//       + <mu1, H - Z1> + <mu2, X - Z2> + (rho/2) ||H - Z1||^2 + (rho/2) ||X - Z2||^2
//
// with <A, B> = Re tr(A^H B). One iteration updates, in order, the channel
// and the signal (closed form), Z1 and Z2 (gradient step or proximal map),
// then both duals. c = 2 gives the unweighted fidelity ||Y - H X||^2.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "dbd/matrix.hpp"
#include "dbd/metrics.hpp"
#include "dbd/regularizers.hpp"

namespace dbd {

enum class ZMode { Smooth, Prox };
enum class StopReason { Converged, MaxIter };
/// Absolute: stop when max(r1, r2, s1, s2) < tol.
/// Relative: stop when max(r1, r2, s1, s2) < tol * max(1, ||Y||_F).
enum class TolScaling { Absolute, Relative };

std::string_view to_string(ZMode mode);
std::string_view to_string(StopReason reason);
std::string_view to_string(TolScaling scaling);

struct AdmmConfig {
  double rho = 1.0;
  int max_iter = 50;
  double tol = 1e-4;
  TolScaling tol_scaling = TolScaling::Absolute;
  /// Gradient step sizes for the smooth z-updates.
  double eta_z1 = 0.5;
  double eta_z2 = 0.5;
  ZMode z_mode = ZMode::Prox;
  /// Prox of the primal iterate alone, without the mu/rho shift.
  bool legacy_prox_no_dual_shift = false;
  /// Default initial signal is init_scale * randn(init_seed).
  double init_scale = 1e-2;
  std::uint64_t init_seed = 0;
  /// Fill IterationRecord::elapsed_s with wall-clock time. Off by default so
  /// traces are reproducible byte for byte.
  bool record_timing = false;

  /// Throws ConfigError. Smooth mode needs both regularizers smooth.
  void validate(const RegularizerSpec& reg_channel, const RegularizerSpec& reg_signal) const;
};

struct AdmmState {
  ComplexMatrix channel;
  ComplexMatrix signal;
  ComplexMatrix z1;
  ComplexMatrix z2;
  ComplexMatrix mu1;
  ComplexMatrix mu2;
  int iter = 0;

  friend bool operator==(const AdmmState&, const AdmmState&) = default;
};

struct Residuals {
  double r1 = 0.0;  // ||channel - z1||
  double r2 = 0.0;  // ||signal - z2||
  double s1 = 0.0;  // rho ||z1 - z1_prev||
  double s2 = 0.0;  // rho ||z2 - z2_prev||

  double max() const noexcept;
};

using IterationObserver = std::function<void(const IterationRecord&)>;

struct AdmmResult {
  AdmmState state;
  std::vector<IterationRecord> trace;
  StopReason stop = StopReason::MaxIter;
};

/// Generic blind problem. The channel is y.rows() x n_tx and the signal
/// n_tx x y.cols().
struct BlindProblem {
  ComplexMatrix y;
  std::size_t n_tx = 0;
  double fidelity = 2.0;
  RegularizerSpec reg_channel;
  RegularizerSpec reg_signal;
  /// Noise variance used for the spectral-efficiency column; 0 leaves it at 0.
  double noise_var = 0.0;
};

/// argmin_G (c/2)||Y_eff - G X||^2 + <mu1, G - z1> + (rho/2)||G - z1||^2
///   = (c Y_eff X^H - mu1 + rho z1)(c X X^H + rho I)^{-1}
ComplexMatrix update_channel(const ComplexMatrix& y_eff, const ComplexMatrix& x,
                             const ComplexMatrix& z1, const ComplexMatrix& mu1, double rho,
                             double c);

/// argmin_X (c/2)||Y - H X||^2 + <mu2, X - z2> + (rho/2)||X - z2||^2
///   = (rho I + c H^H H)^{-1}(c H^H Y - mu2 + rho z2)
ComplexMatrix update_signal(const ComplexMatrix& h, const ComplexMatrix& y,
                            const ComplexMatrix& z2, const ComplexMatrix& mu2, double rho,
                            double c);

/// One gradient step on lambda reg(Z) - <mu, Z> + (rho/2)||anchor - Z||^2.
ComplexMatrix update_z_smooth(const ComplexMatrix& z, const ComplexMatrix& anchor,
                              const ComplexMatrix& mu, const RegularizerSpec& spec, double lambda,
                              double rho, double eta);

/// Exact minimizer of the same subproblem: prox_{(lambda/rho) reg}(anchor + mu/rho).
/// With dual_shift = false the mu/rho term is dropped (legacy form).
ComplexMatrix update_z_prox(const ComplexMatrix& anchor, const ComplexMatrix& mu,
                            const RegularizerSpec& spec, double lambda, double rho,
                            bool dual_shift = true);

/// mu + rho * primal_gap
ComplexMatrix update_duals(const ComplexMatrix& mu, const ComplexMatrix& primal_gap, double rho);

Residuals residuals(const AdmmState& state, const ComplexMatrix& z1_prev,
                    const ComplexMatrix& z2_prev, double rho);

/// Primal objective (c/2)||Y - H X||^2 + lambda_R R(H) + lambda_S S(X).
double problem_objective(const BlindProblem& problem, const ComplexMatrix& channel,
                         const ComplexMatrix& signal);

/// Augmented Lagrangian; +inf when an indicator regularizer is violated at z.
double lagrangian_eval(const BlindProblem& problem, const AdmmState& state, double rho);

/// Zero channel, init_scale * randn signal, z = primal, mu = 0.
AdmmState initial_state(std::size_t channel_rows, std::size_t n_tx, std::size_t t,
                        const AdmmConfig& config);

/// Runs the iteration until the residual test of AdmmConfig::tol_scaling
/// passes (||Y||_F is the data scale) or max_iter. The observer sees every record as it is produced. Throws
/// DivergenceError on a non-finite iterate.
AdmmResult solve(const BlindProblem& problem, const AdmmConfig& config,
                 const IterationObserver& observer = {},
                 std::optional<AdmmState> init = std::nullopt);

}  // namespace dbd
