// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstddef>

#include "cmul.hpp"
#include "dbd/errors.hpp"
#include "dbd/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dbd::kernels {

using detail::abs2;
using detail::mul;

namespace {

// Below this many complex multiply-adds a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = std::size_t{1} << 15;

using Index = std::ptrdiff_t;

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

void gemm(Op op_a, Op op_b, const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c) {
  const std::size_t m = op_a == Op::None ? a.rows() : a.cols();
  const std::size_t inner = op_a == Op::None ? a.cols() : a.rows();
  const std::size_t inner_b = op_b == Op::None ? b.rows() : b.cols();
  const std::size_t n = op_b == Op::None ? b.cols() : b.rows();
  if (inner != inner_b) throw ShapeError("gemm: inner dimensions differ");
  c = ComplexMatrix(m, n);
  const bool par = m * n * inner >= kParallelWork;
  const Index mi = static_cast<Index>(m);

  if (op_b == Op::None) {
    // Row-streaming form: c(i,:) += op(a)(i,k) * b(k,:), k ascending.
#pragma omp parallel for schedule(static) if (par)
    for (Index ii = 0; ii < mi; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      cplx* ci = c.row(i).data();
      for (std::size_t k = 0; k < inner; ++k) {
        const cplx aik = op_a == Op::None ? a(i, k) : std::conj(a(k, i));
        const cplx* bk = b.row(k).data();
        for (std::size_t j = 0; j < n; ++j) ci[j] += mul(aik, bk[j]);
      }
    }
  } else {
#pragma omp parallel for schedule(static) if (par)
    for (Index ii = 0; ii < mi; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      for (std::size_t j = 0; j < n; ++j) {
        cplx s{};
        for (std::size_t k = 0; k < inner; ++k) {
          const cplx aik = op_a == Op::None ? a(i, k) : std::conj(a(k, i));
          s += mul(aik, std::conj(b(j, k)));
        }
        c(i, j) = s;
      }
    }
  }
}

bool cholesky(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ShapeError("cholesky: matrix is not square");
  const bool par = n * n * n / 3 >= kParallelWork;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= abs2(a(j, k));
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    const Index lo = static_cast<Index>(j + 1);
    const Index hi = static_cast<Index>(n);
#pragma omp parallel for schedule(static) if (par)
    for (Index ii = lo; ii < hi; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      cplx s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= mul(a(i, k), std::conj(a(j, k)));
      a(i, j) = s / ljj;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
  return true;
}

void cholesky_solve_left(const ComplexMatrix& l, ComplexMatrix& b) {
  const std::size_t n = l.rows();
  if (b.rows() != n) throw ShapeError("cholesky_solve_left: row count mismatch");
  const std::size_t m = b.cols();
  const bool par = n * n * m >= kParallelWork;
  const Index mi = static_cast<Index>(m);
#pragma omp parallel for schedule(static) if (par)
  for (Index jj = 0; jj < mi; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
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
  const std::size_t m = b.rows();
  const bool par = n * n * m >= kParallelWork;
  const Index mi = static_cast<Index>(m);
#pragma omp parallel for schedule(static) if (par)
  for (Index rr = 0; rr < mi; ++rr) {
    cplx* x = b.row(static_cast<std::size_t>(rr)).data();
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = x[j];
      for (std::size_t k = 0; k < j; ++k) s -= mul(x[k], std::conj(l(j, k)));
      x[j] = s / l(j, j).real();
    }
    for (std::size_t j = n; j-- > 0;) {
      cplx s = x[j];
      for (std::size_t k = j + 1; k < n; ++k) s -= mul(x[k], l(k, j));
      x[j] = s / l(j, j).real();
    }
  }
}

}  // namespace dbd::kernels
