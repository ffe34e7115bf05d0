// SPDX-License-Identifier: Apache-2.0
//
// Platform-stable random streams. std::mt19937_64 has a fully specified output
// sequence; the standard distributions do not, so the transforms live here:
//   uniform   = (x >> 11) * 2^-53, in [0, 1)
//   gaussian  = Box-Muller on (1 - u1, u2), one complex sample per pair:
//               r = sqrt(-2 ln(1 - u1)), re = r cos(2 pi u2) / sqrt 2,
//               im = r sin(2 pi u2) / sqrt 2
// Sub-seeds are derived with splitmix64 (see derive_seed).

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace dbd {

/// splitmix64 finalizer applied to master + (stream + 1) * golden ratio constant.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() noexcept;           // [0, 1)
  double uniform_open_low() noexcept;  // (0, 1]
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Unit-variance circularly-symmetric complex Gaussian.
  std::complex<double> complex_normal() noexcept;
  /// Standard real Gaussian (real part of a complex draw, rescaled).
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
};

}  // namespace dbd
