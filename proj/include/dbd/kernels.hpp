// SPDX-License-Identifier: Apache-2.0
//
// Dense complex kernels. The default namespace holds the OpenMP versions used
// by the solver; `serial` holds the plain reference loops kept for testing and
// benchmarking. Both follow the same accumulation order for every output
// entry, and every output entry is written by exactly one thread, so the two
// agree bit-for-bit regardless of the thread count.

#pragma once

#include "dbd/matrix.hpp"

namespace dbd::kernels {

enum class Op { None, Adjoint };

/// C = op(A) * op(B). C is resized.
void gemm(Op op_a, Op op_b, const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c);

/// In-place Cholesky of a Hermitian positive definite matrix: on success the
/// lower triangle holds L with A = L L^H and the strict upper triangle is zeroed.
/// Returns false when a pivot is not strictly positive and finite.
bool cholesky(ComplexMatrix& a);

/// Solves (L L^H) X = B in place, B is n x m.
void cholesky_solve_left(const ComplexMatrix& l, ComplexMatrix& b);

/// Solves X (L L^H) = B in place, B is m x n.
void cholesky_solve_right(const ComplexMatrix& l, ComplexMatrix& b);

namespace serial {

void gemm(Op op_a, Op op_b, const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c);
bool cholesky(ComplexMatrix& a);
void cholesky_solve_left(const ComplexMatrix& l, ComplexMatrix& b);
void cholesky_solve_right(const ComplexMatrix& l, ComplexMatrix& b);

}  // namespace serial

/// Number of threads an OpenMP region would use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace dbd::kernels
