// SPDX-License-Identifier: Apache-2.0
//
// Scoring for the communication and radar links. None of these have a single
// canonical definition in the JRC literature; the forms used here are the
// standard Gaussian-channel ones:
//
//   SINR [dB]           10 log10( ||H X||^2 / ||Y_c - H X||^2 )      (pooled over antennas)
//   spectral efficiency log2 det( I + H Q H^H / sigma^2 ),  Q = X X^H / T
//   radar MI            log2 det( I + G Q G^H / sigma^2 ),  same Q
//
// so reported values are comparable across runs but not necessarily with
// numbers produced under other conventions.

#pragma once

#include <string>
#include <string_view>

#include "dbd/matrix.hpp"

namespace dbd {

struct IterationRecord {
  int iter = 0;
  double r1 = 0.0;
  double r2 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double objective = 0.0;
  double sinr_db = 0.0;
  double spectral_eff_bits = 0.0;
  double radar_mi_bits = 0.0;
  double tx_power = 0.0;
  double elapsed_s = 0.0;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

/// "iter,r1,r2,s1,s2,objective,sinr_db,spectral_eff_bits,radar_mi_bits,tx_power,elapsed_s"
std::string_view csv_header();
/// One CSV row, 9 significant digits, no trailing newline. A non-finite
/// objective is written as "infeasible".
std::string to_csv_row(const IterationRecord& rec);

/// Pooled SINR in dB. +inf for an exact fit with nonzero signal, -inf for a
/// zero signal against nonzero data. Throws std::domain_error when both the
/// signal and the residual vanish.
double comm_sinr_db(const ComplexMatrix& y_comm, const ComplexMatrix& h, const ComplexMatrix& x);

/// bits/s/Hz. Requires noise_var > 0 and t >= 1.
double spectral_efficiency(const ComplexMatrix& h, const ComplexMatrix& x, double noise_var,
                           std::size_t t);

/// bits per channel use; spectral_efficiency with the radar channel.
double radar_mutual_information(const ComplexMatrix& g, const ComplexMatrix& x, double noise_var,
                                std::size_t t);

struct ChannelError {
  double absolute = 0.0;
  double relative = 0.0;  // absolute / ||truth||_F; +inf when truth is zero and estimate is not
};

ChannelError channel_error(const ComplexMatrix& estimate, const ComplexMatrix& truth);

/// Tr(X X^H) = ||X||_F^2.
double tx_power(const ComplexMatrix& x);

}  // namespace dbd
