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
#ifndef OSLIM_TENSOR_HPP
#define OSLIM_TENSOR_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "oslim/linalg.hpp"
#include "oslim/operator_system.hpp"
#include "oslim/random.hpp"

namespace oslim {

// Certificate that epsilon * unit + u lies in the congruence-generated cone:
// epsilon * 1_n + u == (alpha (x) I) * interleave(kron(P, Q)) * (alpha (x) I)^*.
// alpha is a scalar n x (l*m) matrix, P is positive in M_l(left), Q is
// positive in M_m(right). epsilon == 0 marks an exact generator echo.
struct MaxCertificate {
  ComplexMatrix alpha;
  ComplexMatrix P;
  ComplexMatrix Q;
  std::size_t l = 1;
  std::size_t m = 1;
  double epsilon = 0.0;
};

namespace detail {

// Reindexes kron(P, Q), which lives on (l, dl, m, dr) legs in that order,
// onto (l, m, dl, dr) so that scalar matrices act on the outer (l, m) pair.
inline ComplexMatrix interleave_factors(const ComplexMatrix& k, std::size_t l, std::size_t dl,
                                        std::size_t m, std::size_t dr) {
  const std::size_t n = l * dl * m * dr;
  if (k.rows() != n || k.cols() != n) fail(errc::dimension_mismatch, "interleave shape");
  std::vector<std::size_t> perm(n);
  for (std::size_t u = 0; u < l; ++u)
    for (std::size_t a = 0; a < dl; ++a)
      for (std::size_t v = 0; v < m; ++v)
        for (std::size_t b = 0; b < dr; ++b)
          perm[((u * dl + a) * m + v) * dr + b] = ((u * m + v) * dl + a) * dr + b;
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(perm[i], perm[j]) = k(i, j);
  return out;
}

// Permutation u (x) s (x) t -> u (x) t (x) s on the spatial legs (n, dl, dr).
inline ComplexMatrix shuffle_spatial(const ComplexMatrix& w, std::size_t n, std::size_t dl,
                                     std::size_t dr) {
  const std::size_t d = n * dl * dr;
  if (w.rows() != d || w.cols() != d) fail(errc::dimension_mismatch, "shuffle shape");
  std::vector<std::size_t> perm(d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t a = 0; a < dl; ++a)
      for (std::size_t b = 0; b < dr; ++b) perm[(r * dl + a) * dr + b] = (r * dr + b) * dl + a;
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out(perm[i], perm[j]) = w(i, j);
  return out;
}

inline bool diagonal_span(const ConcreteOperatorSystem& s) {
  if (s.is_full_algebra()) return s.ambient_dim() == 1;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const ComplexMatrix b = s.basis_element(k);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (i != j && b(i, j) != complexd(0.0, 0.0)) return false;
  }
  return true;
}

}  // namespace detail

inline ComplexMatrix certificate_reconstruction(const MaxCertificate& c, std::size_t dl,
                                                std::size_t dr) {
  if (c.P.rows() != c.l * dl || c.Q.rows() != c.m * dr)
    fail(errc::dimension_mismatch, "certificate factor shapes");
  if (c.alpha.cols() != c.l * c.m) fail(errc::dimension_mismatch, "certificate alpha shape");
  const ComplexMatrix g = detail::interleave_factors(kron(c.P, c.Q), c.l, dl, c.m, dr);
  return congruence(kron(c.alpha, ComplexMatrix::identity(dl * dr)), g);
}

// Element of M_n(span(left) (x) span(right)) in the ambient spatial
// representation of size n * d_left * d_right. Elements produced by
// max_generate carry their generating certificate.
class TensorElement {
 public:
  TensorElement(ConcreteOperatorSystem left, ConcreteOperatorSystem right, std::size_t level,
                ComplexMatrix matrix, std::optional<MaxCertificate> cert = std::nullopt)
      : left_(std::move(left)),
        right_(std::move(right)),
        level_(level),
        matrix_(std::move(matrix)),
        cert_(std::move(cert)) {}

  const ConcreteOperatorSystem& left() const { return left_; }
  const ConcreteOperatorSystem& right() const { return right_; }
  std::size_t level() const { return level_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  const std::optional<MaxCertificate>& certificate() const { return cert_; }

 private:
  ConcreteOperatorSystem left_, right_;
  std::size_t level_;
  ComplexMatrix matrix_;
  std::optional<MaxCertificate> cert_;
};

inline ComplexMatrix tensor_unit(const ConcreteOperatorSystem& left,
                                 const ConcreteOperatorSystem& right, std::size_t n) {
  return ComplexMatrix::identity(n * left.ambient_dim() * right.ambient_dim());
}

// Orthogonal projection onto M_n(span(left) (x) span(right)). The two leg
// projections commute, so applying them in sequence gives the joint one.
inline ComplexMatrix tensor_project(const ConcreteOperatorSystem& left,
                                    const ConcreteOperatorSystem& right, std::size_t n,
                                    const ComplexMatrix& w) {
  const std::size_t dl = left.ambient_dim(), dr = right.ambient_dim();
  const std::size_t d = n * dl * dr;
  if (w.rows() != d || w.cols() != d) fail(errc::dimension_mismatch, "tensor element shape");
  ComplexMatrix out = w;
  if (!left.is_full_algebra()) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t c = 0; c < dr; ++c)
          for (std::size_t e = 0; e < dr; ++e) {
            ComplexMatrix slice(dl, dl);
            for (std::size_t a = 0; a < dl; ++a)
              for (std::size_t b = 0; b < dl; ++b)
                slice(a, b) = out((r * dl + a) * dr + c, (s * dl + b) * dr + e);
            slice = left.project_block(slice);
            for (std::size_t a = 0; a < dl; ++a)
              for (std::size_t b = 0; b < dl; ++b)
                out((r * dl + a) * dr + c, (s * dl + b) * dr + e) = slice(a, b);
          }
  }
  if (!right.is_full_algebra()) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t a = 0; a < dl; ++a)
          for (std::size_t b = 0; b < dl; ++b) {
            ComplexMatrix slice(dr, dr);
            for (std::size_t c = 0; c < dr; ++c)
              for (std::size_t e = 0; e < dr; ++e)
                slice(c, e) = out((r * dl + a) * dr + c, (s * dl + b) * dr + e);
            slice = right.project_block(slice);
            for (std::size_t c = 0; c < dr; ++c)
              for (std::size_t e = 0; e < dr; ++e)
                out((r * dl + a) * dr + c, (s * dl + b) * dr + e) = slice(c, e);
          }
  }
  return out;
}

inline TensorElement make_tensor_element(const ConcreteOperatorSystem& left,
                                         const ConcreteOperatorSystem& right, std::size_t n,
                                         const ComplexMatrix& w, Tolerance tol = {}) {
  const ComplexMatrix p = tensor_project(left, right, n, w);
  const double residual = max_abs_diff(w, p);
  if (residual > tol.eps)
    fail(errc::not_in_span, "matrix leaves the joint tensor span, residual " +
                                std::to_string(residual));
  return TensorElement(left, right, n, w);
}

inline ConeVerdict min_positive(const TensorElement& u, Tolerance tol = {}) {
  if (!u.matrix().is_hermitian(tol))
    fail(errc::not_hermitian, "tensor element is not Hermitian within tolerance");
  ConeVerdict v;
  const double lo = min_eigenvalue(u.matrix().hermitized(), tol);
  v.witness = lo;
  if (lo >= -tol.eps) {
    v.status = ConeStatus::positive;
    v.detail = "spatially positive";
  } else {
    v.status = ConeStatus::not_positive;
    v.detail = "eigenvalue witness below -eps";
  }
  return v;
}

inline TensorElement max_generate(const ConcreteOperatorSystem& left,
                                  const ConcreteOperatorSystem& right, std::size_t n,
                                  const ComplexMatrix& alpha, const ComplexMatrix& P,
                                  const ComplexMatrix& Q, Tolerance tol = {}) {
  const std::size_t dl = left.ambient_dim(), dr = right.ambient_dim();
  if (P.rows() != P.cols() || P.rows() == 0 || P.rows() % dl != 0)
    fail(errc::dimension_mismatch, "P must be square at a level of the left system");
  if (Q.rows() != Q.cols() || Q.rows() == 0 || Q.rows() % dr != 0)
    fail(errc::dimension_mismatch, "Q must be square at a level of the right system");
  const std::size_t l = P.rows() / dl, m = Q.rows() / dr;
  if (alpha.rows() != n || alpha.cols() != l * m)
    fail(errc::dimension_mismatch, "alpha must be " + std::to_string(n) + "x" +
                                       std::to_string(l * m));
  if (!left.is_positive(l, P, tol).positive())
    fail(errc::not_positive_factor, "P is not positive in the left system");
  if (!right.is_positive(m, Q, tol).positive())
    fail(errc::not_positive_factor, "Q is not positive in the right system");
  MaxCertificate cert{alpha, P, Q, l, m, 0.0};
  ComplexMatrix w = certificate_reconstruction(cert, dl, dr);
  return TensorElement(left, right, n, std::move(w), std::move(cert));
}

inline bool certificate_valid(const TensorElement& u, const MaxCertificate& c,
                              Tolerance tol = {}) {
  const std::size_t dl = u.left().ambient_dim(), dr = u.right().ambient_dim();
  if (!u.left().is_positive(c.l, c.P, tol).positive()) return false;
  if (!u.right().is_positive(c.m, c.Q, tol).positive()) return false;
  const ComplexMatrix lhs =
      tensor_unit(u.left(), u.right(), u.level()).scaled(c.epsilon) + u.matrix();
  const ComplexMatrix rhs = certificate_reconstruction(c, dl, dr);
  return max_abs_diff(lhs, rhs) <= 100.0 * tol.eps;
}

inline TensorElement swap_factors(const TensorElement& u) {
  const std::size_t n = u.level();
  const std::size_t dl = u.left().ambient_dim(), dr = u.right().ambient_dim();
  std::optional<MaxCertificate> cert;
  if (u.certificate()) {
    const MaxCertificate& c = *u.certificate();
    MaxCertificate sw;
    sw.P = c.Q;
    sw.Q = c.P;
    sw.l = c.m;
    sw.m = c.l;
    sw.epsilon = c.epsilon;
    sw.alpha = ComplexMatrix(n, c.l * c.m);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t i = 0; i < c.l; ++i)
        for (std::size_t j = 0; j < c.m; ++j) sw.alpha(r, j * c.l + i) = c.alpha(r, i * c.m + j);
    cert = std::move(sw);
  }
  return TensorElement(u.right(), u.left(), n, detail::shuffle_spatial(u.matrix(), n, dl, dr),
                       std::move(cert));
}

struct SearchBudget {
  std::size_t l_max = 0;    // 0 means 2 * level
  std::size_t m_max = 0;    // 0 means 2 * level
  std::size_t restarts = 50;
  std::size_t iterations = 30;
  std::uint64_t seed = 0;
};

namespace detail {

// Exact certificate when the right factor is a full matrix algebra: fold the
// right spatial leg into the rows of P and pair it against the maximally
// entangled positive Q.
inline MaxCertificate certificate_right_full(const ComplexMatrix& w, std::size_t n,
                                             std::size_t dl, std::size_t dr, double epsilon) {
  MaxCertificate c;
  c.l = n * dr;
  c.m = dr;
  c.epsilon = epsilon;
  c.P = ComplexMatrix(c.l * dl, c.l * dl);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t b = 0; b < dr; ++b)
      for (std::size_t i = 0; i < dl; ++i)
        for (std::size_t r2 = 0; r2 < n; ++r2)
          for (std::size_t b2 = 0; b2 < dr; ++b2)
            for (std::size_t i2 = 0; i2 < dl; ++i2)
              c.P((r * dr + b) * dl + i, (r2 * dr + b2) * dl + i2) =
                  w((r * dl + i) * dr + b, (r2 * dl + i2) * dr + b2);
  c.Q = ComplexMatrix(dr * dr, dr * dr);
  for (std::size_t a = 0; a < dr; ++a)
    for (std::size_t b = 0; b < dr; ++b) c.Q(a * dr + a, b * dr + b) = 1.0;
  c.alpha = ComplexMatrix(n, c.l * c.m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t b = 0; b < dr; ++b) c.alpha(r, (r * dr + b) * dr + b) = 1.0;
  return c;
}

// Exact certificate when the right span consists of all diagonal matrices:
// stack the diagonal slices of w and pair them against the matching diagonal
// selector Q.
inline MaxCertificate certificate_right_diagonal(const ComplexMatrix& w, std::size_t n,
                                                 std::size_t dl, std::size_t dr, double epsilon) {
  MaxCertificate c;
  c.l = dr * n;
  c.m = dr;
  c.epsilon = epsilon;
  c.P = ComplexMatrix(c.l * dl, c.l * dl);
  for (std::size_t j = 0; j < dr; ++j)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t i = 0; i < dl; ++i)
        for (std::size_t r2 = 0; r2 < n; ++r2)
          for (std::size_t i2 = 0; i2 < dl; ++i2)
            c.P(((j * n + r) * dl) + i, ((j * n + r2) * dl) + i2) =
                w((r * dl + i) * dr + j, (r2 * dl + i2) * dr + j);
  c.Q = ComplexMatrix(dr * dr, dr * dr);
  for (std::size_t j = 0; j < dr; ++j) c.Q(j * dr + j, j * dr + j) = 1.0;
  c.alpha = ComplexMatrix(n, c.l * c.m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < dr; ++j) c.alpha(r, (j * n + r) * dr + j) = 1.0;
  return c;
}

// Best fit of w by M (x) unit with M PSD; succeeds only when w is close to a
// scalar-matrix multiple of the tensor unit.
inline std::optional<MaxCertificate> certificate_unit_fit(const TensorElement& u,
                                                          const ComplexMatrix& w, std::size_t n,
                                                          double epsilon, Tolerance tol) {
  const std::size_t dl = u.left().ambient_dim(), dr = u.right().ambient_dim();
  const std::size_t d = dl * dr;
  ComplexMatrix fit(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s) {
      complexd tr = 0.0;
      for (std::size_t a = 0; a < d; ++a) tr += w(r * d + a, s * d + a);
      fit(r, s) = tr / static_cast<double>(d);
    }
  fit = fit.hermitized();
  if (min_eigenvalue(fit, tol) < -tol.eps) return std::nullopt;
  const ComplexMatrix model = kron(fit, ComplexMatrix::identity(d));
  if (max_abs_diff(w, model) > 100.0 * tol.eps) return std::nullopt;
  MaxCertificate c;
  c.l = n;
  c.m = 1;
  c.epsilon = epsilon;
  c.P = kron(ComplexMatrix::identity(n), u.left().unit());
  c.Q = u.right().unit();
  c.alpha = psd_sqrt(fit, tol);
  return c;
}

// Nearest-Kronecker-factor extraction: given g on (l, dl, m, dr) interleaved
// as (l, m, dl, dr), compute the partial inner product against Q, leaving a
// candidate for P (and symmetrically for Q).
inline ComplexMatrix extract_left_factor(const ComplexMatrix& g, const ComplexMatrix& q,
                                         std::size_t l, std::size_t dl, std::size_t m,
                                         std::size_t dr) {
  const double qn = frobenius_inner(q, q).real();
  ComplexMatrix p(l * dl, l * dl);
  if (qn <= 0.0) return p;
  for (std::size_t u = 0; u < l; ++u)
    for (std::size_t a = 0; a < dl; ++a)
      for (std::size_t u2 = 0; u2 < l; ++u2)
        for (std::size_t a2 = 0; a2 < dl; ++a2) {
          complexd acc = 0.0;
          for (std::size_t v = 0; v < m; ++v)
            for (std::size_t b = 0; b < dr; ++b)
              for (std::size_t v2 = 0; v2 < m; ++v2)
                for (std::size_t b2 = 0; b2 < dr; ++b2)
                  acc += g(((u * m + v) * dl + a) * dr + b, ((u2 * m + v2) * dl + a2) * dr + b2) *
                         std::conj(q(v * dr + b, v2 * dr + b2));
          p(u * dl + a, u2 * dl + a2) = acc / qn;
        }
  return p;
}

inline ComplexMatrix extract_right_factor(const ComplexMatrix& g, const ComplexMatrix& p,
                                          std::size_t l, std::size_t dl, std::size_t m,
                                          std::size_t dr) {
  const double pn = frobenius_inner(p, p).real();
  ComplexMatrix q(m * dr, m * dr);
  if (pn <= 0.0) return q;
  for (std::size_t v = 0; v < m; ++v)
    for (std::size_t b = 0; b < dr; ++b)
      for (std::size_t v2 = 0; v2 < m; ++v2)
        for (std::size_t b2 = 0; b2 < dr; ++b2) {
          complexd acc = 0.0;
          for (std::size_t u = 0; u < l; ++u)
            for (std::size_t a = 0; a < dl; ++a)
              for (std::size_t u2 = 0; u2 < l; ++u2)
                for (std::size_t a2 = 0; a2 < dl; ++a2)
                  acc += g(((u * m + v) * dl + a) * dr + b, ((u2 * m + v2) * dl + a2) * dr + b2) *
                         std::conj(p(u * dl + a, u2 * dl + a2));
          q(v * dr + b, v2 * dr + b2) = acc / pn;
        }
  return q;
}

// Projects a candidate factor onto the positive cone of M_k(sys): block
// projection onto the span, hermitization, then eigenvalue clipping followed
// by one more span projection to stay inside.
inline ComplexMatrix positive_factor_project(const ConcreteOperatorSystem& sys, std::size_t k,
                                             const ComplexMatrix& x, Tolerance tol) {
  ComplexMatrix y = sys.project(k, x).hermitized();
  HermitianEigenSystem es = hermitian_eigensystem(y, tol);
  const std::size_t d = y.rows();
  ComplexMatrix clipped(d, d);
  for (std::size_t t = 0; t < d; ++t) {
    if (es.values[t] <= 0.0) continue;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        clipped(i, j) += es.values[t] * es.vectors(i, t) * std::conj(es.vectors(j, t));
  }
  return sys.project(k, clipped).hermitized();
}

inline std::optional<MaxCertificate> certificate_als(const TensorElement& u,
                                                     const ComplexMatrix& w, double epsilon,
                                                     const SearchBudget& budget, Rng& rng,
                                                     Tolerance tol) {
  const std::size_t n = u.level();
  const std::size_t dl = u.left().ambient_dim(), dr = u.right().ambient_dim();
  const std::size_t lmax = budget.l_max ? budget.l_max : 2 * n;
  const std::size_t mmax = budget.m_max ? budget.m_max : 2 * n;
  const std::size_t l = 1 + rng.pick(lmax);
  const std::size_t m = 1 + rng.pick(mmax);
  // The refit solves dense least-squares problems of side l*m*dl*dr; beyond
  // desk scale the closed forms are the only viable routes.
  if (l * m * dl * dr > 96) return std::nullopt;
  ComplexMatrix P = random_positive_element(u.left(), l, rng, tol);
  ComplexMatrix Q = random_positive_element(u.right(), m, rng, tol);
  ComplexMatrix alpha = random_gaussian_matrix(rng, n, l * m);
  const ComplexMatrix eye = ComplexMatrix::identity(dl * dr);
  for (std::size_t it = 0; it < budget.iterations; ++it) {
    const ComplexMatrix g = interleave_factors(kron(P, Q), l, dl, m, dr);
    ComplexMatrix lift = kron(alpha, eye);
    // alpha step: solve w ~ A * (g A*) in least squares, then compress the
    // solution back to a scalar matrix by a partial trace.
    {
      const ComplexMatrix h = g * lift.adjoint();
      const ComplexMatrix gram = (h * h.adjoint()).hermitized();
      const ComplexMatrix anew = w * h.adjoint() * hermitian_pinv(gram, 1e-10, tol);
      ComplexMatrix compressed(n, l * m);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < l * m; ++c) {
          complexd acc = 0.0;
          for (std::size_t s = 0; s < dl * dr; ++s)
            acc += anew(r * dl * dr + s, c * dl * dr + s);
          compressed(r, c) = acc / static_cast<double>(dl * dr);
        }
      alpha = compressed;
      lift = kron(alpha, eye);
    }
    // Factor steps: pull w back through the lift, then split off the nearest
    // Kronecker factors subject to positivity in their systems.
    const ComplexMatrix pinv_a = hermitian_pinv((alpha.adjoint() * alpha).hermitized(), 1e-10, tol);
    const ComplexMatrix back = kron(pinv_a * alpha.adjoint(), eye);
    const ComplexMatrix target = (back * w * back.adjoint()).hermitized();
    P = positive_factor_project(u.left(), l, extract_left_factor(target, Q, l, dl, m, dr), tol);
    Q = positive_factor_project(u.right(), m, extract_right_factor(target, P, l, dl, m, dr), tol);
    const ComplexMatrix rec = congruence(lift, interleave_factors(kron(P, Q), l, dl, m, dr));
    if (max_abs_diff(w, rec) <= 100.0 * tol.eps) {
      MaxCertificate c{alpha, P, Q, l, m, epsilon};
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Searches for a self-verifying max-cone certificate of u. Ladder entries are
// tried in the given (descending) order against closed-form constructions
// first and randomized alternating refits second; absence of a certificate is
// not a disproof.
inline std::optional<MaxCertificate> max_certificate_search(const TensorElement& u,
                                                            const std::vector<double>& ladder =
                                                                default_ladder(),
                                                            const SearchBudget& budget = {},
                                                            Tolerance tol = {}) {
  if (min_positive(u, tol).status != ConeStatus::positive)
    fail(errc::necessary_condition_failed, "element is not min-positive");
  if (ladder.empty()) fail(errc::empty_ladder, "ladder must be non-empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0)) fail(errc::invalid_argument, "ladder entries must be positive");
    if (i && !(ladder[i] < ladder[i - 1]))
      fail(errc::invalid_argument, "ladder must be strictly descending");
  }
  if (u.certificate() && certificate_valid(u, *u.certificate(), tol)) return u.certificate();

  const std::size_t n = u.level();
  const std::size_t dl = u.left().ambient_dim(), dr = u.right().ambient_dim();
  const bool right_full = u.right().is_full_algebra();
  const bool left_full = u.left().is_full_algebra();
  const bool right_diag = !right_full && u.right().dim() == dr && detail::diagonal_span(u.right());
  const bool left_diag = !left_full && u.left().dim() == dl && detail::diagonal_span(u.left());

  Rng rng(budget.seed);
  for (double eps_step : ladder) {
    const ComplexMatrix w =
        (tensor_unit(u.left(), u.right(), n).scaled(eps_step) + u.matrix()).hermitized();
    if (right_full) {
      MaxCertificate c = detail::certificate_right_full(w, n, dl, dr, eps_step);
      if (certificate_valid(u, c, tol)) return c;
    }
    if (right_diag) {
      MaxCertificate c = detail::certificate_right_diagonal(w, n, dl, dr, eps_step);
      if (certificate_valid(u, c, tol)) return c;
    }
    if (left_full || left_diag) {
      const TensorElement sw = swap_factors(u);
      const ComplexMatrix wsw = detail::shuffle_spatial(w, n, dl, dr);
      MaxCertificate c = left_full ? detail::certificate_right_full(wsw, n, dr, dl, eps_step)
                                   : detail::certificate_right_diagonal(wsw, n, dr, dl, eps_step);
      if (certificate_valid(sw, c, tol)) {
        const TensorElement echo(u.right(), u.left(), n, wsw, c);
        const MaxCertificate back = *swap_factors(echo).certificate();
        if (certificate_valid(u, back, tol)) return back;
      }
    }
    if (auto c = detail::certificate_unit_fit(u, w, n, eps_step, tol)) {
      if (certificate_valid(u, *c, tol)) return c;
    }
    for (std::size_t restart = 0; restart < budget.restarts; ++restart) {
      if (auto c = detail::certificate_als(u, w, eps_step, budget, rng, tol)) {
        if (certificate_valid(u, *c, tol)) return c;
      }
    }
  }
  return std::nullopt;
}

struct MinMaxReport {
  std::size_t total = 0;
  std::size_t min_positive_count = 0;
  double worst_eigenvalue = 0.0;
  bool all_pass() const { return min_positive_count == total; }
};

// Samples random max generators and checks each against the min cone. The
// ordering holds by construction, so every sample must pass.
inline MinMaxReport min_leq_max_check(const ConcreteOperatorSystem& left,
                                      const ConcreteOperatorSystem& right, std::size_t n,
                                      std::size_t samples, std::uint64_t seed,
                                      Tolerance tol = {}) {
  MinMaxReport report;
  report.total = samples;
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t l = 1 + rng.pick(2 * n);
    const std::size_t m = 1 + rng.pick(2 * n);
    const ComplexMatrix P = random_positive_element(left, l, rng, tol);
    const ComplexMatrix Q = random_positive_element(right, m, rng, tol);
    const ComplexMatrix alpha = random_gaussian_matrix(rng, n, l * m);
    const TensorElement u = max_generate(left, right, n, alpha, P, Q, tol);
    const ConeVerdict v = min_positive(u, tol);
    if (v.status == ConeStatus::positive) {
      ++report.min_positive_count;
    }
    if (v.witness && *v.witness < report.worst_eigenvalue) report.worst_eigenvalue = *v.witness;
  }
  return report;
}

}  // namespace oslim

#endif  // OSLIM_TENSOR_HPP
