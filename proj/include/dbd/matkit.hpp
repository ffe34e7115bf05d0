// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dbd/errors.hpp"
#include "dbd/matrix.hpp"

namespace dbd {

ComplexMatrix hermitian(const ComplexMatrix& a);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
/// a^H * b
ComplexMatrix matmul_ah(const ComplexMatrix& a, const ComplexMatrix& b);
/// a * b^H
ComplexMatrix matmul_bh(const ComplexMatrix& a, const ComplexMatrix& b);

double frob_norm_sq(const ComplexMatrix& a);
double frob_norm(const ComplexMatrix& a);

/// Re tr(A^H B). Real-valued and symmetric in its arguments.
double frob_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// A^{-1} B for Hermitian positive definite A, via Cholesky. `context` names
/// the caller in the IllConditionedError raised when the factorization fails.
ComplexMatrix solve_left(const ComplexMatrix& a, const ComplexMatrix& b,
                         std::string_view context = "solve_left");

/// B A^{-1} for Hermitian positive definite A.
ComplexMatrix solve_right(const ComplexMatrix& a, const ComplexMatrix& b,
                          std::string_view context = "solve_right");

/// log det A for Hermitian positive definite A (natural log).
double log_det_hpd(const ComplexMatrix& a, std::string_view context = "log_det_hpd");

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// Adds s to every diagonal entry of a square matrix.
void add_diagonal(ComplexMatrix& a, double s);

bool all_finite(const ComplexMatrix& a) noexcept;

/// i.i.d. circularly-symmetric complex Gaussian entries with unit variance
/// (real and imaginary parts each variance 1/2). See rng.hpp for the stream.
ComplexMatrix randn_complex(std::size_t rows, std::size_t cols, std::uint64_t seed);

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, std::string_view what);

}  // namespace dbd
