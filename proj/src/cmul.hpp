// SPDX-License-Identifier: Apache-2.0
//
// Plain complex arithmetic shared by the kernel implementations. Spelled out
// instead of std::complex operator* so that no NaN-recovery path is taken and
// both kernel flavours execute identical floating-point operations.

#pragma once

#include "dbd/matrix.hpp"

namespace dbd::detail {

inline cplx mul(cplx a, cplx b) noexcept {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline double abs2(cplx a) noexcept { return a.real() * a.real() + a.imag() * a.imag(); }

}  // namespace dbd::detail
