// SPDX-License-Identifier: Apache-2.0

#include "dbd/admm.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dbd/detail/admm_loop.hpp"
#include "dbd/errors.hpp"
#include "dbd/matkit.hpp"

namespace dbd {

std::string_view to_string(ZMode mode) { return mode == ZMode::Smooth ? "smooth" : "prox"; }

std::string_view to_string(StopReason reason) {
  return reason == StopReason::Converged ? "converged" : "max_iter";
}

std::string_view to_string(TolScaling scaling) {
  return scaling == TolScaling::Absolute ? "absolute" : "relative";
}

void AdmmConfig::validate(const RegularizerSpec& reg_channel,
                          const RegularizerSpec& reg_signal) const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("rho must be > 0");
  if (max_iter < 0) throw ConfigError("max_iter must be >= 0");
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (!(init_scale >= 0.0)) throw ConfigError("init_scale must be >= 0");
  reg_channel.validate();
  reg_signal.validate();
  if (z_mode == ZMode::Smooth) {
    if (!(eta_z1 > 0.0) || !(eta_z2 > 0.0)) throw ConfigError("eta_z1 and eta_z2 must be > 0");
    for (const RegularizerSpec* r : {&reg_channel, &reg_signal}) {
      if (!r->smooth()) {
        throw ConfigError("z_mode 'smooth' needs differentiable regularizers, got '" + r->name() +
                          "'; use z_mode 'prox'");
      }
    }
  }
}

double Residuals::max() const noexcept { return std::max(std::max(r1, r2), std::max(s1, s2)); }

ComplexMatrix update_channel(const ComplexMatrix& y_eff, const ComplexMatrix& x,
                             const ComplexMatrix& z1, const ComplexMatrix& mu1, double rho,
                             double c) {
  require_same_shape(z1, mu1, "update_channel");
  ComplexMatrix system = c * matmul_bh(x, x);
  add_diagonal(system, rho);
  ComplexMatrix rhs = c * matmul_bh(y_eff, x);
  rhs -= mu1;
  rhs += rho * z1;
  return solve_right(system, rhs, "update_channel");
}

ComplexMatrix update_signal(const ComplexMatrix& h, const ComplexMatrix& y,
                            const ComplexMatrix& z2, const ComplexMatrix& mu2, double rho,
                            double c) {
  require_same_shape(z2, mu2, "update_signal");
  ComplexMatrix system = c * matmul_ah(h, h);
  add_diagonal(system, rho);
  ComplexMatrix rhs = c * matmul_ah(h, y);
  rhs -= mu2;
  rhs += rho * z2;
  return solve_left(system, rhs, "update_signal");
}

ComplexMatrix update_z_smooth(const ComplexMatrix& z, const ComplexMatrix& anchor,
                              const ComplexMatrix& mu, const RegularizerSpec& spec, double lambda,
                              double rho, double eta) {
  require_same_shape(z, anchor, "update_z_smooth");
  require_same_shape(z, mu, "update_z_smooth");
  ComplexMatrix grad = lambda * reg_grad(spec, z);
  grad -= mu;
  grad += rho * (z - anchor);
  return z - eta * grad;
}

ComplexMatrix update_z_prox(const ComplexMatrix& anchor, const ComplexMatrix& mu,
                            const RegularizerSpec& spec, double lambda, double rho,
                            bool dual_shift) {
  require_same_shape(anchor, mu, "update_z_prox");
  if (!dual_shift) return reg_prox(spec, anchor, lambda / rho);
  return reg_prox(spec, anchor + (1.0 / rho) * mu, lambda / rho);
}

ComplexMatrix update_duals(const ComplexMatrix& mu, const ComplexMatrix& primal_gap, double rho) {
  require_same_shape(mu, primal_gap, "update_duals");
  return mu + rho * primal_gap;
}

Residuals residuals(const AdmmState& state, const ComplexMatrix& z1_prev,
                    const ComplexMatrix& z2_prev, double rho) {
  return {
      frob_norm(state.channel - state.z1),
      frob_norm(state.signal - state.z2),
      rho * frob_norm(state.z1 - z1_prev),
      rho * frob_norm(state.z2 - z2_prev),
  };
}

double problem_objective(const BlindProblem& problem, const ComplexMatrix& channel,
                         const ComplexMatrix& signal) {
  const double fit = 0.5 * problem.fidelity * frob_norm_sq(problem.y - matmul(channel, signal));
  return fit + reg_weighted(problem.reg_channel, channel) +
         reg_weighted(problem.reg_signal, signal);
}

double lagrangian_eval(const BlindProblem& problem, const AdmmState& s, double rho) {
  const double regs = reg_weighted(problem.reg_channel, s.z1) + reg_weighted(problem.reg_signal, s.z2);
  if (!std::isfinite(regs)) return std::numeric_limits<double>::infinity();
  const ComplexMatrix gap1 = s.channel - s.z1;
  const ComplexMatrix gap2 = s.signal - s.z2;
  const double fit = 0.5 * problem.fidelity * frob_norm_sq(problem.y - matmul(s.channel, s.signal));
  return fit + regs + frob_inner(s.mu1, gap1) + frob_inner(s.mu2, gap2) +
         0.5 * rho * (frob_norm_sq(gap1) + frob_norm_sq(gap2));
}

AdmmState initial_state(std::size_t channel_rows, std::size_t n_tx, std::size_t t,
                        const AdmmConfig& config) {
  AdmmState s;
  s.channel = ComplexMatrix(channel_rows, n_tx);
  s.signal = config.init_scale * randn_complex(n_tx, t, config.init_seed);
  s.z1 = s.channel;
  s.z2 = s.signal;
  s.mu1 = ComplexMatrix(channel_rows, n_tx);
  s.mu2 = ComplexMatrix(n_tx, t);
  return s;
}

namespace {

class BlindModel {
 public:
  explicit BlindModel(const BlindProblem& p) : p_(p), scale_(frob_norm(p.y)) {}

  ComplexMatrix channel_step(const AdmmState& s, double rho) const {
    return update_channel(p_.y, s.signal, s.z1, s.mu1, rho, p_.fidelity);
  }
  ComplexMatrix signal_step(const AdmmState& s, double rho) const {
    return update_signal(s.channel, p_.y, s.z2, s.mu2, rho, p_.fidelity);
  }
  const RegularizerSpec& reg_channel() const { return p_.reg_channel; }
  const RegularizerSpec& reg_signal() const { return p_.reg_signal; }
  double data_scale() const { return scale_; }

  void score(const AdmmState& s, IterationRecord& rec) const {
    const ComplexMatrix hx = matmul(s.channel, s.signal);
    rec.objective = 0.5 * p_.fidelity * frob_norm_sq(p_.y - hx) +
                    reg_weighted(p_.reg_channel, s.z1) + reg_weighted(p_.reg_signal, s.z2);
    const double signal = frob_norm_sq(hx);
    const double residual = frob_norm_sq(p_.y - hx);
    rec.sinr_db = (signal == 0.0 && residual == 0.0)
                      ? std::numeric_limits<double>::quiet_NaN()
                      : comm_sinr_db(p_.y, s.channel, s.signal);
    if (p_.noise_var > 0.0) {
      rec.spectral_eff_bits = spectral_efficiency(s.channel, s.signal, p_.noise_var, p_.y.cols());
    }
    rec.tx_power = tx_power(s.signal);
  }

 private:
  const BlindProblem& p_;
  double scale_;
};

}  // namespace

AdmmResult solve(const BlindProblem& problem, const AdmmConfig& config,
                 const IterationObserver& observer, std::optional<AdmmState> init) {
  config.validate(problem.reg_channel, problem.reg_signal);
  if (problem.y.empty() || problem.n_tx == 0) throw ShapeError("solve: empty problem");
  if (!(problem.fidelity > 0.0)) throw ConfigError("solve: fidelity coefficient must be > 0");
  AdmmState state = init ? std::move(*init)
                         : initial_state(problem.y.rows(), problem.n_tx, problem.y.cols(), config);
  if (state.channel.rows() != problem.y.rows() || state.channel.cols() != problem.n_tx ||
      state.signal.rows() != problem.n_tx || state.signal.cols() != problem.y.cols()) {
    throw ShapeError("solve: initial state does not match the problem dimensions");
  }
  require_same_shape(state.channel, state.z1, "solve: z1");
  require_same_shape(state.channel, state.mu1, "solve: mu1");
  require_same_shape(state.signal, state.z2, "solve: z2");
  require_same_shape(state.signal, state.mu2, "solve: mu2");
  return detail::run_admm(BlindModel(problem), config, std::move(state), observer);
}

}  // namespace dbd
