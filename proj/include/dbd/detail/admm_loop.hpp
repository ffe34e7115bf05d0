// SPDX-License-Identifier: Apache-2.0
//
// Iteration driver shared by the generic and JRC solvers. A model supplies the
// two closed-form primal steps, the regularizers, the stopping scale and the
// per-iteration scoring; everything else (z-updates, duals, residuals,
// stopping, divergence checks) lives here so both solvers execute the same
// floating-point sequence.

#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <utility>

#include "dbd/admm.hpp"
#include "dbd/errors.hpp"
#include "dbd/matkit.hpp"

namespace dbd::detail {

template <class M>
concept AdmmModel = requires(const M& m, const AdmmState& s, IterationRecord& rec) {
  { m.channel_step(s, 1.0) } -> std::same_as<ComplexMatrix>;
  { m.signal_step(s, 1.0) } -> std::same_as<ComplexMatrix>;
  { m.reg_channel() } -> std::convertible_to<const RegularizerSpec&>;
  { m.reg_signal() } -> std::convertible_to<const RegularizerSpec&>;
  { m.data_scale() } -> std::convertible_to<double>;
  m.score(s, rec);
};

inline ComplexMatrix z_step(const AdmmConfig& cfg, const ComplexMatrix& z,
                            const ComplexMatrix& anchor, const ComplexMatrix& mu,
                            const RegularizerSpec& spec, double eta) {
  if (cfg.z_mode == ZMode::Smooth) {
    return update_z_smooth(z, anchor, mu, spec, spec.weight, cfg.rho, eta);
  }
  return update_z_prox(anchor, mu, spec, spec.weight, cfg.rho, !cfg.legacy_prox_no_dual_shift);
}

inline void check_finite(const AdmmState& s) {
  const std::pair<const char*, const ComplexMatrix*> parts[] = {
      {"channel", &s.channel}, {"signal", &s.signal}, {"z1", &s.z1},
      {"z2", &s.z2},           {"mu1", &s.mu1},       {"mu2", &s.mu2},
  };
  for (const auto& [name, m] : parts) {
    if (!all_finite(*m)) {
      throw DivergenceError(s.iter, std::string("non-finite ") + name + " at iteration " +
                                        std::to_string(s.iter));
    }
  }
}

template <AdmmModel Model>
AdmmResult run_admm(const Model& model, const AdmmConfig& cfg, AdmmState state,
                    const IterationObserver& observer) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const double threshold = cfg.tol_scaling == TolScaling::Absolute
                               ? cfg.tol
                               : cfg.tol * std::max(1.0, model.data_scale());

  AdmmResult result;
  result.trace.reserve(static_cast<std::size_t>(std::max(cfg.max_iter, 0)));
  for (int k = 0; k < cfg.max_iter; ++k) {
    // rho > 0 keeps both systems positive definite; a failed factorization
    // means the iterates have blown up.
    try {
      state.channel = model.channel_step(state, cfg.rho);
      state.signal = model.signal_step(state, cfg.rho);
    } catch (const IllConditionedError& e) {
      throw DivergenceError(k + 1, std::string(e.what()) + " at iteration " + std::to_string(k + 1));
    }

    const ComplexMatrix z1_prev = std::move(state.z1);
    const ComplexMatrix z2_prev = std::move(state.z2);
    state.z1 = z_step(cfg, z1_prev, state.channel, state.mu1, model.reg_channel(), cfg.eta_z1);
    state.z2 = z_step(cfg, z2_prev, state.signal, state.mu2, model.reg_signal(), cfg.eta_z2);

    state.mu1 = update_duals(state.mu1, state.channel - state.z1, cfg.rho);
    state.mu2 = update_duals(state.mu2, state.signal - state.z2, cfg.rho);
    state.iter = k + 1;
    check_finite(state);

    const Residuals res = residuals(state, z1_prev, z2_prev, cfg.rho);
    IterationRecord rec;
    rec.iter = state.iter;
    rec.r1 = res.r1;
    rec.r2 = res.r2;
    rec.s1 = res.s1;
    rec.s2 = res.s2;
    model.score(state, rec);
    if (cfg.record_timing) {
      rec.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
    }
    result.trace.push_back(rec);
    if (observer) observer(rec);

    if (res.max() < threshold) {
      result.stop = StopReason::Converged;
      break;
    }
  }
  result.state = std::move(state);
  return result;
}

}  // namespace dbd::detail
