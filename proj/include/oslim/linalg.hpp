/*
 * Copyright 2026 The oslim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "oslim/error.hpp"

namespace oslim {

using complexd = std::complex<double>;

/// Absolute tolerance used by every numeric comparison in the library.
/// Membership residuals, eigenvalue cutoffs and entrywise equality all
/// compare against `eps` directly (no relative scaling).
struct Tolerance {
  double eps = 1e-9;

  Tolerance() = default;
  explicit Tolerance(double e) : eps(e) {
    if (!(e >= 0.0) || !std::isfinite(e))
      fail(errc::invalid_argument, "tolerance eps must be finite and >= 0");
  }
};

/// Dense row-major complex matrix. All entries are kept finite; factory
/// construction from raw data validates this once, arithmetic preserves it.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, complexd(0.0, 0.0)) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complexd> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows * cols)
      fail(errc::dimension_mismatch, "entry count " + std::to_string(a_.size()) +
                                         " does not match " + std::to_string(rows) + "x" +
                                         std::to_string(cols));
    for (const complexd& z : a_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        fail(errc::invalid_argument, "matrix entries must be finite");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  static ComplexMatrix diagonal(const std::vector<complexd>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// Row-wise literal, convenient in tests: from_rows({{1, 2}, {3, 4}}).
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<complexd>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) fail(errc::dimension_mismatch, "ragged row literal");
      std::size_t j = 0;
      for (const complexd& z : row) m(i, j++) = z;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return a_.size(); }
  bool is_square() const { return rows_ == cols_; }

  complexd& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const complexd& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  const std::vector<complexd>& entries() const { return a_; }

  ComplexMatrix operator+(const ComplexMatrix& o) const {
    require_same_shape(o, "+");
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
  }

  ComplexMatrix operator-(const ComplexMatrix& o) const {
    require_same_shape(o, "-");
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
  }

  ComplexMatrix operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_)
      fail(errc::dimension_mismatch, "product of " + shape_str() + " and " + o.shape_str());
    ComplexMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const complexd aik = a_[i * cols_ + k];
        if (aik == complexd(0.0, 0.0)) continue;
        const complexd* orow = &o.a_[k * o.cols_];
        complexd* rrow = &r.a_[i * o.cols_];
        for (std::size_t j = 0; j < o.cols_; ++j) rrow[j] += aik * orow[j];
      }
    }
    return r;
  }

  ComplexMatrix scaled(complexd c) const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = c * a_[k];
    return r;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  complexd trace() const {
    if (!is_square()) fail(errc::dimension_mismatch, "trace of non-square matrix");
    complexd t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const complexd& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const complexd& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  /// max |A - A*| over entries; 0 for exactly Hermitian matrices.
  double hermitian_defect() const {
    if (!is_square()) fail(errc::dimension_mismatch, "hermitian defect of non-square matrix");
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  bool is_hermitian(Tolerance tol = {}) const { return hermitian_defect() <= tol.eps; }

  /// (A + A*)/2.
  ComplexMatrix hermitized() const {
    if (!is_square()) fail(errc::dimension_mismatch, "hermitize of non-square matrix");
    ComplexMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        r(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return r;
  }

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) const {
    if (r0 + h > rows_ || c0 + w > cols_) fail(errc::dimension_mismatch, "block out of range");
    ComplexMatrix b(h, w);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
      fail(errc::dimension_mismatch, "set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      fail(errc::dimension_mismatch,
           std::string(op) + " on " + shape_str() + " and " + o.shape_str());
  }

  std::size_t rows_, cols_;
  std::vector<complexd> a_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(errc::dimension_mismatch, "diff of " + a.shape_str() + " and " + b.shape_str());
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, Tolerance tol = {}) {
  return max_abs_diff(a, b) <= tol.eps;
}

/// tr(A* B), the Frobenius inner product (conjugate-linear in A).
inline complexd frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(errc::dimension_mismatch, "inner product shape mismatch");
  complexd s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::conj(a(i, j)) * b(i, j);
  return s;
}

/// Kronecker product with row-major block convention:
/// kron(A, B)[(i*Br + k), (j*Bc + l)] = A(i, j) * B(k, l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const complexd aij = a(i, j);
      if (aij == complexd(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

/// alpha * X * alpha^dagger for rectangular alpha (n x m) and square X (m x m).
inline ComplexMatrix congruence(const ComplexMatrix& alpha, const ComplexMatrix& x) {
  if (!x.is_square()) fail(errc::dimension_mismatch, "congruence needs square middle factor");
  if (alpha.cols() != x.rows())
    fail(errc::dimension_mismatch,
         "congruence of " + alpha.shape_str() + " with " + x.shape_str());
  return alpha * x * alpha.adjoint();
}

inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

struct HermitianEigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns, H = V diag(values) V^*
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing A(p, q). A is Hermitian; V accumulates
// the product of rotations on the right.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const complexd apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  double t;
  if (tau >= 0.0)
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  else
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const complexd u = apq / r;
  const complexd cu = std::conj(u);

  const std::size_t n = a.rows();
  // A <- A R with R[p][p]=c, R[p][q]=s, R[q][p]=-s*conj(u), R[q][q]=c*conj(u).
  for (std::size_t k = 0; k < n; ++k) {
    const complexd akp = a(k, p);
    const complexd akq = a(k, q);
    a(k, p) = c * akp - s * cu * akq;
    a(k, q) = s * akp + c * cu * akq;
  }
  // A <- R^* A.
  for (std::size_t k = 0; k < n; ++k) {
    const complexd apk = a(p, k);
    const complexd aqk = a(q, k);
    a(p, k) = c * apk - s * u * aqk;
    a(q, k) = s * apk + c * u * aqk;
  }
  // Keep the pivot pair exactly Hermitian against rounding drift.
  a(p, p) = complexd(a(p, p).real(), 0.0);
  a(q, q) = complexd(a(q, q).real(), 0.0);
  a(p, q) = std::conj(a(q, p));
  for (std::size_t k = 0; k < n; ++k) {
    const complexd vkp = v(k, p);
    const complexd vkq = v(k, q);
    v(k, p) = c * vkp - s * cu * vkq;
    v(k, q) = s * vkp + c * cu * vkq;
  }
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for Hermitian matrices. The input must be
/// Hermitian within tol.eps; it is symmetrized to (H + H*)/2 before
/// iteration. Sweeps stop once the off-diagonal Frobenius norm drops to
/// tol.eps (or the machine floor for the matrix scale, whichever is larger);
/// more than 100 sweeps raises NoConvergence.
inline HermitianEigenSystem hermitian_eigensystem(const ComplexMatrix& h, Tolerance tol = {}) {
  if (!h.is_square()) fail(errc::dimension_mismatch, "eigensystem of non-square matrix");
  const std::size_t n = h.rows();
  if (n == 0) fail(errc::invalid_argument, "eigensystem of empty matrix");
  if (h.hermitian_defect() > tol.eps)
    fail(errc::not_hermitian,
         "hermitian defect " + std::to_string(h.hermitian_defect()) + " exceeds tolerance");

  ComplexMatrix a = h.hermitized();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() * std::max(1e-300, a.max_abs()) * double(n);
  const double stop = std::max(tol.eps, floor);
  const std::size_t max_sweeps = 100;

  bool converged = n == 1;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    if (detail::off_diagonal_norm(a) <= stop) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }
  if (!converged && detail::off_diagonal_norm(a) > stop)
    fail(errc::no_convergence, "jacobi sweep limit (100) exceeded");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigenSystem out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

/// Ascending eigenvalues of a Hermitian matrix.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h, Tolerance tol = {}) {
  return hermitian_eigensystem(h, tol).values;
}

inline double min_eigenvalue(const ComplexMatrix& h, Tolerance tol = {}) {
  return hermitian_eigensystem(h, tol).values.front();
}

/// True iff every eigenvalue is >= -tol.eps.
inline bool is_psd(const ComplexMatrix& h, Tolerance tol = {}) {
  return min_eigenvalue(h, tol) >= -tol.eps;
}

/// Clip negative eigenvalues to zero and take the square root:
/// the unique PSD B with B*B ~ max(H, 0).
inline ComplexMatrix psd_sqrt(const ComplexMatrix& h, Tolerance tol = {}) {
  HermitianEigenSystem es = hermitian_eigensystem(h, tol);
  const std::size_t n = h.rows();
  ComplexMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (es.values[k] <= 0.0) continue;
    const double w = std::sqrt(es.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const complexd vik = es.vectors(i, k);
      if (vik == complexd(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += w * vik * std::conj(es.vectors(j, k));
    }
  }
  return r;
}

/// Moore-Penrose inverse of a Hermitian matrix via its eigensystem;
/// eigenvalues with |w| <= cutoff are dropped.
inline ComplexMatrix hermitian_pinv(const ComplexMatrix& h, double cutoff, Tolerance tol = {}) {
  HermitianEigenSystem es = hermitian_eigensystem(h, tol);
  const std::size_t n = h.rows();
  ComplexMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(es.values[k]) <= cutoff) continue;
    const double w = 1.0 / es.values[k];
    for (std::size_t i = 0; i < n; ++i) {
      const complexd vik = es.vectors(i, k);
      if (vik == complexd(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += w * vik * std::conj(es.vectors(j, k));
    }
  }
  return r;
}

}  // namespace oslim
