// SPDX-License-Identifier: Apache-2.0

#include "dbd/matkit.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "cmul.hpp"
#include "dbd/kernels.hpp"
#include "dbd/rng.hpp"

namespace dbd {

namespace {

std::string shape_str(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

ComplexMatrix factor_or_throw(const ComplexMatrix& a, std::string_view context) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(context) + ": system matrix " + shape_str(a) + " is not square");
  }
  ComplexMatrix l = a;
  if (!kernels::cholesky(l)) {
    throw IllConditionedError(std::string(context) +
                              ": system matrix is not numerically positive definite");
  }
  return l;
}

}  // namespace

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, std::string_view what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": shape mismatch " + shape_str(a) + " vs " +
                     shape_str(b));
  }
}

ComplexMatrix hermitian(const ComplexMatrix& a) {
  ComplexMatrix h(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(j, i) = std::conj(a(i, j));
  return h;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c;
  kernels::gemm(kernels::Op::None, kernels::Op::None, a, b, c);
  return c;
}

ComplexMatrix matmul_ah(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c;
  kernels::gemm(kernels::Op::Adjoint, kernels::Op::None, a, b, c);
  return c;
}

ComplexMatrix matmul_bh(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c;
  kernels::gemm(kernels::Op::None, kernels::Op::Adjoint, a, b, c);
  return c;
}

double frob_norm_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (const cplx& v : a.data()) s += detail::abs2(v);
  return s;
}

double frob_norm(const ComplexMatrix& a) { return std::sqrt(frob_norm_sq(a)); }

double frob_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "frob_inner");
  const auto da = a.data();
  const auto db = b.data();
  double s = 0.0;
  for (std::size_t k = 0; k < da.size(); ++k) {
    s += da[k].real() * db[k].real() + da[k].imag() * db[k].imag();
  }
  return s;
}

ComplexMatrix solve_left(const ComplexMatrix& a, const ComplexMatrix& b, std::string_view context) {
  if (b.rows() != a.rows()) {
    throw ShapeError(std::string(context) + ": cannot solve " + shape_str(a) + " \\ " +
                     shape_str(b));
  }
  const ComplexMatrix l = factor_or_throw(a, context);
  ComplexMatrix x = b;
  kernels::cholesky_solve_left(l, x);
  return x;
}

ComplexMatrix solve_right(const ComplexMatrix& a, const ComplexMatrix& b,
                          std::string_view context) {
  if (b.cols() != a.rows()) {
    throw ShapeError(std::string(context) + ": cannot solve " + shape_str(b) + " / " +
                     shape_str(a));
  }
  const ComplexMatrix l = factor_or_throw(a, context);
  ComplexMatrix x = b;
  kernels::cholesky_solve_right(l, x);
  return x;
}

double log_det_hpd(const ComplexMatrix& a, std::string_view context) {
  const ComplexMatrix l = factor_or_throw(a, context);
  double s = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i).real());
  return 2.0 * s;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("hermitian_eigenvalues: matrix is not square");
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

void add_diagonal(ComplexMatrix& a, double s) {
  if (a.rows() != a.cols()) throw ShapeError("add_diagonal: matrix is not square");
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += s;
}

bool all_finite(const ComplexMatrix& a) noexcept {
  for (const cplx& v : a.data()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

ComplexMatrix randn_complex(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix m(rows, cols);
  for (cplx& v : m.data()) v = rng.complex_normal();
  return m;
}

}  // namespace dbd
