// SPDX-License-Identifier: Apache-2.0

#include "dbd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dbd/matkit.hpp"

namespace dbd {

namespace {

void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out += buf;
}

double gaussian_capacity_bits(const ComplexMatrix& channel, const ComplexMatrix& x,
                              double noise_var, std::size_t t, const char* what) {
  if (!(noise_var > 0.0)) throw std::invalid_argument(std::string(what) + ": noise_var must be > 0");
  if (t < 1) throw std::invalid_argument(std::string(what) + ": t must be >= 1");
  // I + (1/sigma^2) M Q M^H with Q = X X^H / t, i.e. I + (M X)(M X)^H / (t sigma^2).
  const ComplexMatrix mx = matmul(channel, x);
  ComplexMatrix k = matmul_bh(mx, mx);
  k *= 1.0 / (static_cast<double>(t) * noise_var);
  add_diagonal(k, 1.0);
  const double nats = log_det_hpd(k, what);
  return std::max(0.0, nats / std::numbers::ln2);
}

}  // namespace

std::string_view csv_header() {
  return "iter,r1,r2,s1,s2,objective,sinr_db,spectral_eff_bits,radar_mi_bits,tx_power,elapsed_s";
}

std::string to_csv_row(const IterationRecord& rec) {
  std::string out = std::to_string(rec.iter);
  for (double v : {rec.r1, rec.r2, rec.s1, rec.s2}) {
    out += ',';
    append_num(out, v);
  }
  out += ',';
  if (std::isfinite(rec.objective)) {
    append_num(out, rec.objective);
  } else {
    out += "infeasible";
  }
  for (double v : {rec.sinr_db, rec.spectral_eff_bits, rec.radar_mi_bits, rec.tx_power,
                   rec.elapsed_s}) {
    out += ',';
    append_num(out, v);
  }
  return out;
}

double comm_sinr_db(const ComplexMatrix& y_comm, const ComplexMatrix& h, const ComplexMatrix& x) {
  const ComplexMatrix hx = matmul(h, x);
  require_same_shape(y_comm, hx, "comm_sinr_db");
  const double signal = frob_norm_sq(hx);
  const double residual = frob_norm_sq(y_comm - hx);
  if (signal == 0.0 && residual == 0.0) {
    throw std::domain_error("comm_sinr_db: zero signal and zero residual");
  }
  if (residual == 0.0) return std::numeric_limits<double>::infinity();
  if (signal == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / residual);
}

double spectral_efficiency(const ComplexMatrix& h, const ComplexMatrix& x, double noise_var,
                           std::size_t t) {
  return gaussian_capacity_bits(h, x, noise_var, t, "spectral_efficiency");
}

double radar_mutual_information(const ComplexMatrix& g, const ComplexMatrix& x, double noise_var,
                                std::size_t t) {
  return gaussian_capacity_bits(g, x, noise_var, t, "radar_mutual_information");
}

ChannelError channel_error(const ComplexMatrix& estimate, const ComplexMatrix& truth) {
  require_same_shape(estimate, truth, "channel_error");
  ChannelError e;
  e.absolute = frob_norm(estimate - truth);
  const double scale = frob_norm(truth);
  if (scale > 0.0) {
    e.relative = e.absolute / scale;
  } else {
    e.relative = e.absolute == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return e;
}

double tx_power(const ComplexMatrix& x) { return frob_norm_sq(x); }

}  // namespace dbd
