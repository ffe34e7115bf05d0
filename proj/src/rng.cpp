// SPDX-License-Identifier: Apache-2.0

#include "dbd/rng.hpp"

#include <cmath>
#include <numbers>

namespace dbd {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() noexcept {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open_low() noexcept { return 1.0 - uniform(); }

std::complex<double> Rng::complex_normal() noexcept {
  const double u1 = uniform_open_low();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1));  // sqrt(-2 ln u1) / sqrt(2)
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

double Rng::normal() noexcept { return complex_normal().real() * std::numbers::sqrt2; }

}  // namespace dbd
