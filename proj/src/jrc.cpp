// SPDX-License-Identifier: Apache-2.0

#include "dbd/jrc.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dbd/detail/admm_loop.hpp"
#include "dbd/errors.hpp"
#include "dbd/matkit.hpp"

namespace dbd {

namespace {

std::string dims(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void JrcInstance::validate() const {
  if (y_radar.empty() || y_comm.empty() || h_comm.empty()) {
    throw ShapeError("JrcInstance: y_radar, y_comm and h_comm must be non-empty");
  }
  if (y_radar.cols() != y_comm.cols()) {
    throw ShapeError("JrcInstance: y_radar " + dims(y_radar) + " and y_comm " + dims(y_comm) +
                     " must share the symbol count");
  }
  if (h_comm.rows() != y_comm.rows()) {
    throw ShapeError("JrcInstance: h_comm " + dims(h_comm) + " does not match y_comm " +
                     dims(y_comm));
  }
  if (g_nominal && (g_nominal->rows() != y_radar.rows() || g_nominal->cols() != h_comm.cols())) {
    throw ShapeError("JrcInstance: g_nominal " + dims(*g_nominal) + " should be " +
                     std::to_string(y_radar.rows()) + "x" + std::to_string(h_comm.cols()));
  }
  if (!(lambda_radar >= 0.0) || !(lambda_comm >= 0.0) || !(lambda_radar + lambda_comm > 0.0)) {
    throw ConfigError("JrcInstance: fidelity weights must be >= 0 with a positive sum");
  }
  if (!(noise_var >= 0.0)) throw ConfigError("JrcInstance: noise_var must be >= 0");
  reg_channel.validate();
  reg_signal.validate();
  if (truth) {
    if (truth->g_true.rows() != y_radar.rows() || truth->g_true.cols() != h_comm.cols() ||
        truth->x_true.rows() != h_comm.cols() || truth->x_true.cols() != y_radar.cols()) {
      throw ShapeError("JrcInstance: ground truth shapes are inconsistent");
    }
  }
}

ComplexMatrix full_channel(const JrcInstance& inst, const ComplexMatrix& channel) {
  return inst.g_nominal ? *inst.g_nominal + channel : channel;
}

double jrc_objective(const JrcInstance& inst, const ComplexMatrix& g, const ComplexMatrix& x) {
  const double radar = 0.5 * inst.lambda_radar * frob_norm_sq(inst.y_radar - matmul(g, x));
  const double comm = 0.5 * inst.lambda_comm * frob_norm_sq(inst.y_comm - matmul(inst.h_comm, x));
  const double r = inst.g_nominal ? reg_weighted(inst.reg_channel, g - *inst.g_nominal)
                                  : reg_weighted(inst.reg_channel, g);
  return radar + comm + r + reg_weighted(inst.reg_signal, x);
}

ComplexMatrix update_g_jrc(const JrcInstance& inst, const ComplexMatrix& x,
                           const ComplexMatrix& z1, const ComplexMatrix& mu1, double rho) {
  if (inst.g_nominal) {
    const ComplexMatrix y_eff = inst.y_radar - matmul(*inst.g_nominal, x);
    return update_channel(y_eff, x, z1, mu1, rho, inst.lambda_radar);
  }
  return update_channel(inst.y_radar, x, z1, mu1, rho, inst.lambda_radar);
}

ComplexMatrix update_x_jrc(const JrcInstance& inst, const ComplexMatrix& g,
                           const ComplexMatrix& z2, const ComplexMatrix& mu2, double rho) {
  require_same_shape(z2, mu2, "update_x_jrc");
  ComplexMatrix system = inst.lambda_radar * matmul_ah(g, g);
  system += inst.lambda_comm * matmul_ah(inst.h_comm, inst.h_comm);
  add_diagonal(system, rho);
  ComplexMatrix rhs = inst.lambda_radar * matmul_ah(g, inst.y_radar);
  rhs += inst.lambda_comm * matmul_ah(inst.h_comm, inst.y_comm);
  rhs -= mu2;
  rhs += rho * z2;
  return solve_left(system, rhs, "update_x_jrc");
}

double jrc_lagrangian(const JrcInstance& inst, const AdmmState& s, double rho) {
  const double regs = reg_weighted(inst.reg_channel, s.z1) + reg_weighted(inst.reg_signal, s.z2);
  if (!std::isfinite(regs)) return std::numeric_limits<double>::infinity();
  const ComplexMatrix g = full_channel(inst, s.channel);
  const ComplexMatrix gap1 = s.channel - s.z1;
  const ComplexMatrix gap2 = s.signal - s.z2;
  const double fit =
      0.5 * inst.lambda_radar * frob_norm_sq(inst.y_radar - matmul(g, s.signal)) +
      0.5 * inst.lambda_comm * frob_norm_sq(inst.y_comm - matmul(inst.h_comm, s.signal));
  return fit + regs + frob_inner(s.mu1, gap1) + frob_inner(s.mu2, gap2) +
         0.5 * rho * (frob_norm_sq(gap1) + frob_norm_sq(gap2));
}

ComplexMatrix reported_signal(const JrcInstance& inst, const ComplexMatrix& signal) {
  if (std::holds_alternative<reg::PowerBall>(inst.reg_signal.form)) {
    return reg_prox(inst.reg_signal, signal, 1.0);
  }
  return signal;
}

AdmmState jrc_initial_state(const JrcInstance& inst, const AdmmConfig& config) {
  return initial_state(inst.n_radar(), inst.n_tx(), inst.t(), config);
}

double jrc_data_scale(const JrcInstance& inst) {
  double s = 0.0;
  if (inst.lambda_radar > 0.0) s += frob_norm_sq(inst.y_radar);
  if (inst.lambda_comm > 0.0) s += frob_norm_sq(inst.y_comm);
  return std::sqrt(s);
}

namespace {

class JrcModel {
 public:
  explicit JrcModel(const JrcInstance& inst) : inst_(inst), scale_(jrc_data_scale(inst)) {}

  ComplexMatrix channel_step(const AdmmState& s, double rho) const {
    return update_g_jrc(inst_, s.signal, s.z1, s.mu1, rho);
  }
  ComplexMatrix signal_step(const AdmmState& s, double rho) const {
    return update_x_jrc(inst_, full_channel(inst_, s.channel), s.z2, s.mu2, rho);
  }
  const RegularizerSpec& reg_channel() const { return inst_.reg_channel; }
  const RegularizerSpec& reg_signal() const { return inst_.reg_signal; }
  double data_scale() const { return scale_; }

  void score(const AdmmState& s, IterationRecord& rec) const {
    const ComplexMatrix g = full_channel(inst_, s.channel);
    rec.objective =
        0.5 * inst_.lambda_radar * frob_norm_sq(inst_.y_radar - matmul(g, s.signal)) +
        0.5 * inst_.lambda_comm * frob_norm_sq(inst_.y_comm - matmul(inst_.h_comm, s.signal)) +
        reg_weighted(inst_.reg_channel, s.z1) + reg_weighted(inst_.reg_signal, s.z2);

    const ComplexMatrix x = reported_signal(inst_, s.signal);
    const ComplexMatrix hx = matmul(inst_.h_comm, x);
    if (frob_norm_sq(hx) == 0.0 && frob_norm_sq(inst_.y_comm - hx) == 0.0) {
      rec.sinr_db = std::numeric_limits<double>::quiet_NaN();
    } else {
      rec.sinr_db = comm_sinr_db(inst_.y_comm, inst_.h_comm, x);
    }
    if (inst_.noise_var > 0.0) {
      rec.spectral_eff_bits = spectral_efficiency(inst_.h_comm, x, inst_.noise_var, inst_.t());
      rec.radar_mi_bits = radar_mutual_information(g, x, inst_.noise_var, inst_.t());
    }
    rec.tx_power = tx_power(x);
  }

 private:
  const JrcInstance& inst_;
  double scale_;
};

}  // namespace

JrcResult solve_jrc(const JrcInstance& inst, const AdmmConfig& config,
                    const IterationObserver& observer, std::optional<AdmmState> init) {
  inst.validate();
  config.validate(inst.reg_channel, inst.reg_signal);
  AdmmState state = init ? std::move(*init) : jrc_initial_state(inst, config);
  if (state.channel.rows() != inst.n_radar() || state.channel.cols() != inst.n_tx() ||
      state.signal.rows() != inst.n_tx() || state.signal.cols() != inst.t()) {
    throw ShapeError("solve_jrc: initial state does not match the instance dimensions");
  }
  require_same_shape(state.channel, state.z1, "solve_jrc: z1");
  require_same_shape(state.channel, state.mu1, "solve_jrc: mu1");
  require_same_shape(state.signal, state.z2, "solve_jrc: z2");
  require_same_shape(state.signal, state.mu2, "solve_jrc: mu2");

  AdmmResult run = detail::run_admm(JrcModel(inst), config, std::move(state), observer);
  JrcResult out;
  out.g_est = full_channel(inst, run.state.channel);
  out.x_est = reported_signal(inst, run.state.signal);
  out.state = std::move(run.state);
  out.trace = std::move(run.trace);
  out.stop = run.stop;
  return out;
}

}  // namespace dbd
