// SPDX-License-Identifier: Apache-2.0
//
// Textbook reference loops. Kept deliberately simple: one output entry at a
// time, inner index ascending.

#include <cmath>

#include "cmul.hpp"
#include "dbd/errors.hpp"
#include "dbd/kernels.hpp"

namespace dbd::kernels::serial {

using detail::abs2;
using detail::mul;

void gemm(Op op_a, Op op_b, const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c) {
  auto at = [&](std::size_t i, std::size_t k) {
    return op_a == Op::None ? a(i, k) : std::conj(a(k, i));
  };
  auto bt = [&](std::size_t k, std::size_t j) {
    return op_b == Op::None ? b(k, j) : std::conj(b(j, k));
  };
  const std::size_t m = op_a == Op::None ? a.rows() : a.cols();
  const std::size_t inner = op_a == Op::None ? a.cols() : a.rows();
  const std::size_t n = op_b == Op::None ? b.cols() : b.rows();
  if (inner != (op_b == Op::None ? b.rows() : b.cols())) {
    throw ShapeError("gemm: inner dimensions differ");
  }
  c = ComplexMatrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx s{};
      for (std::size_t k = 0; k < inner; ++k) s += mul(at(i, k), bt(k, j));
      c(i, j) = s;
    }
  }
}

bool cholesky(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ShapeError("cholesky: matrix is not square");
  // Row by row (Cholesky-Banachiewicz).
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      cplx s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= mul(a(i, k), std::conj(a(j, k)));
      a(i, j) = s / a(j, j).real();
    }
    double d = a(i, i).real();
    for (std::size_t k = 0; k < i; ++k) d -= abs2(a(i, k));
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    a(i, i) = std::sqrt(d);
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
  }
  return true;
}

void cholesky_solve_left(const ComplexMatrix& l, ComplexMatrix& b) {
  const std::size_t n = l.rows();
  if (b.rows() != n) throw ShapeError("cholesky_solve_left: row count mismatch");
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = b(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= mul(l(i, k), b(k, j));
      b(i, j) = s / l(i, i).real();
    }
    for (std::size_t i = n; i-- > 0;) {
      cplx s = b(i, j);
      for (std::size_t k = i + 1; k < n; ++k) s -= mul(std::conj(l(k, i)), b(k, j));
      b(i, j) = s / l(i, i).real();
    }
  }
}

void cholesky_solve_right(const ComplexMatrix& l, ComplexMatrix& b) {
  const std::size_t n = l.rows();
  if (b.cols() != n) throw ShapeError("cholesky_solve_right: column count mismatch");
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = b(r, j);
      for (std::size_t k = 0; k < j; ++k) s -= mul(b(r, k), std::conj(l(j, k)));
      b(r, j) = s / l(j, j).real();
    }
    for (std::size_t j = n; j-- > 0;) {
      cplx s = b(r, j);
      for (std::size_t k = j + 1; k < n; ++k) s -= mul(b(r, k), l(k, j));
      b(r, j) = s / l(j, j).real();
    }
  }
}

}  // namespace dbd::kernels::serial
