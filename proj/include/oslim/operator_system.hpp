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

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oslim/linalg.hpp"
#include "oslim/random.hpp"

namespace oslim {

enum class ConeStatus { positive, not_positive, unknown };

inline const char* cone_status_name(ConeStatus s) {
  switch (s) {
    case ConeStatus::positive: return "Positive";
    case ConeStatus::not_positive: return "NotPositive";
    case ConeStatus::unknown: return "Unknown";
  }
  return "?";
}

/// Three-valued positivity verdict. `witness` carries the decisive margin
/// (minimal eigenvalue for spectral tests) when one is available.
struct ConeVerdict {
  ConeStatus status = ConeStatus::unknown;
  std::optional<double> witness;
  std::string detail;

  bool positive() const { return status == ConeStatus::positive; }
};

struct MembershipResult {
  bool contained = false;
  double residual = 0.0;
  /// Least-squares coordinates, block-major: coords[(r*n + s)*dim + i] is the
  /// coefficient of basis element i in block (r, s).
  std::vector<complexd> coords;
};

/// A unital self-adjoint subspace of a matrix algebra, described by an
/// ordered basis whose first element is the identity. Full matrix algebras
/// get a structural representation: the basis (identity, E_ij + E_ji,
/// i(E_ij - E_ji), E_kk - E_{k+1,k+1}) is synthesized on demand instead of
/// being stored, which keeps large stages affordable.
class ConcreteOperatorSystem {
 public:
  ConcreteOperatorSystem() = default;

  static ConcreteOperatorSystem from_basis(std::size_t ambient_dim,
                                           std::vector<ComplexMatrix> basis, std::string name,
                                           Tolerance tol = {}) {
    auto impl = std::make_shared<Impl>();
    impl->ambient = ambient_dim;
    impl->name = std::move(name);
    impl->full = false;
    impl->basis = std::move(basis);
    validate(*impl, tol);
    ConcreteOperatorSystem s;
    s.impl_ = std::move(impl);
    return s;
  }

  static ConcreteOperatorSystem full_matrix_algebra(std::size_t ambient_dim,
                                                    std::string name = "") {
    if (ambient_dim == 0) fail(errc::invalid_argument, "ambient dimension must be positive");
    auto impl = std::make_shared<Impl>();
    impl->ambient = ambient_dim;
    impl->name = name.empty() ? "M_" + std::to_string(ambient_dim) : std::move(name);
    impl->full = true;
    ConcreteOperatorSystem s;
    s.impl_ = std::move(impl);
    return s;
  }

  bool valid() const { return impl_ != nullptr; }
  std::size_t ambient_dim() const { return impl().ambient; }
  const std::string& name() const { return impl().name; }
  bool is_full_algebra() const { return impl().full; }

  /// Number of basis elements (d^2 for a full algebra).
  std::size_t dim() const {
    return impl().full ? impl().ambient * impl().ambient : impl().basis.size();
  }

  ComplexMatrix basis_element(std::size_t i) const {
    const Impl& im = impl();
    if (!im.full) {
      if (i >= im.basis.size()) fail(errc::invalid_argument, "basis index out of range");
      return im.basis[i];
    }
    return full_basis_element(im.ambient, i);
  }

  ComplexMatrix unit() const { return impl().full ? ComplexMatrix::identity(impl().ambient)
                                                  : impl().basis[0]; }

  /// Order unit of M_n(S): the n-fold block-diagonal copy of the unit.
  ComplexMatrix unit_at_level(std::size_t n) const {
    require_level(n);
    return kron(ComplexMatrix::identity(n), unit());
  }

  /// Least-squares membership of M in M_n(S). The residual is the Frobenius
  /// norm of M minus its projection onto the blockwise span.
  MembershipResult contains(std::size_t level, const ComplexMatrix& m, Tolerance tol = {}) const {
    require_level(level);
    const Impl& im = impl();
    const std::size_t d = im.ambient;
    if (m.rows() != level * d || m.cols() != level * d)
      fail(errc::dimension_mismatch, "expected " + std::to_string(level * d) + "x" +
                                         std::to_string(level * d) + " matrix, got " +
                                         m.shape_str());
    MembershipResult out;
    const std::size_t dim_s = dim();
    out.coords.resize(level * level * dim_s);
    double res2 = 0.0;
    for (std::size_t r = 0; r < level; ++r)
      for (std::size_t s = 0; s < level; ++s) {
        const ComplexMatrix blk = m.block(r * d, s * d, d, d);
        std::span<complexd> c(out.coords.data() + (r * level + s) * dim_s, dim_s);
        res2 += block_coords(blk, c);
      }
    out.residual = std::sqrt(res2);
    out.contained = out.residual <= tol.eps;
    return out;
  }

  /// Reassemble a level-n element from block-major coordinates.
  ComplexMatrix from_coords(std::size_t level, std::span<const complexd> coords) const {
    require_level(level);
    const std::size_t d = impl().ambient;
    const std::size_t dim_s = dim();
    if (coords.size() != level * level * dim_s)
      fail(errc::dimension_mismatch, "coordinate count mismatch");
    ComplexMatrix m(level * d, level * d);
    for (std::size_t r = 0; r < level; ++r)
      for (std::size_t s = 0; s < level; ++s) {
        ComplexMatrix blk = block_from_coords(
            std::span<const complexd>(coords.data() + (r * level + s) * dim_s, dim_s));
        m.set_block(r * d, s * d, blk);
      }
    return m;
  }

  /// Frobenius projection of M onto M_n(span S), blockwise.
  ComplexMatrix project(std::size_t level, const ComplexMatrix& m) const {
    if (impl().full) return m;
    MembershipResult mem = contains(level, m);  // coords are tolerance-independent
    return from_coords(level, mem.coords);
  }

  /// Projection of a single ambient block onto span S (level-free helper).
  ComplexMatrix project_block(const ComplexMatrix& blk) const {
    if (impl().full) return blk;
    std::vector<complexd> c(dim());
    block_coords(blk, c);
    return block_from_coords(c);
  }

  /// Spectral positivity of an element of M_n(S): membership first
  /// (NotInSystem if the residual exceeds eps), then Hermitian check, then
  /// PSD of the ambient representation.
  ConeVerdict is_positive(std::size_t level, const ComplexMatrix& m, Tolerance tol = {}) const {
    MembershipResult mem = contains(level, m, tol);
    if (!mem.contained)
      fail(errc::not_in_system,
           "membership residual " + std::to_string(mem.residual) + " exceeds tolerance");
    ConeVerdict v;
    if (m.hermitian_defect() > tol.eps) {
      v.status = ConeStatus::not_positive;
      v.detail = "not hermitian";
      return v;
    }
    const double lam = min_eigenvalue(m, tol);
    v.witness = lam;
    v.status = lam >= -tol.eps ? ConeStatus::positive : ConeStatus::not_positive;
    v.detail = "min eigenvalue";
    return v;
  }

  /// Structural identity: same shared representation, or same ambient
  /// dimension and entrywise-equal bases.
  bool same_system(const ConcreteOperatorSystem& o, Tolerance tol = {}) const {
    if (impl_ == o.impl_) return true;
    if (!impl_ || !o.impl_) return false;
    if (ambient_dim() != o.ambient_dim() || dim() != o.dim()) return false;
    if (is_full_algebra() && o.is_full_algebra()) return true;
    for (std::size_t i = 0; i < dim(); ++i)
      if (max_abs_diff(basis_element(i), o.basis_element(i)) > tol.eps) return false;
    return true;
  }

 private:
  struct Impl {
    std::size_t ambient = 0;
    std::string name;
    bool full = false;
    std::vector<ComplexMatrix> basis;  // empty when full
    ComplexMatrix gram_pinv;           // explicit systems only
  };

  const Impl& impl() const {
    if (!impl_) fail(errc::invalid_argument, "uninitialized operator system");
    return *impl_;
  }

  static void require_level_static(std::size_t n) {
    if (n == 0) fail(errc::invalid_argument, "matrix level must be >= 1");
  }
  void require_level(std::size_t n) const {
    require_level_static(n);
    (void)impl();
  }

  static void validate(Impl& im, Tolerance tol) {
    if (im.ambient == 0) fail(errc::invalid_argument, "ambient dimension must be positive");
    if (im.basis.empty()) fail(errc::missing_unit, "basis is empty");
    const std::size_t d = im.ambient;
    for (const ComplexMatrix& b : im.basis)
      if (b.rows() != d || b.cols() != d)
        fail(errc::dimension_mismatch, "basis element is " + b.shape_str() + ", ambient is " +
                                           std::to_string(d));
    if (max_abs_diff(im.basis[0], ComplexMatrix::identity(d)) > tol.eps)
      fail(errc::missing_unit, "basis[0] must be the identity");
    if (im.basis.size() > d * d)
      fail(errc::dependent_basis, "basis larger than the ambient algebra dimension");

    const std::size_t s = im.basis.size();
    ComplexMatrix gram(s, s);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) gram(i, j) = frobenius_inner(im.basis[i], im.basis[j]);
    const double gmin = min_eigenvalue(gram, tol);
    if (gmin <= tol.eps)
      fail(errc::dependent_basis,
           "gram matrix min eigenvalue " + std::to_string(gmin) + " is not above tolerance");
    im.gram_pinv = hermitian_pinv(gram, tol.eps, tol);

    // Adjoint closure: the adjoint of every basis element must project back
    // onto the span with negligible residual.
    for (std::size_t i = 0; i < s; ++i) {
      const ComplexMatrix adj = im.basis[i].adjoint();
      std::vector<complexd> c(s);
      ComplexMatrix recon(d, d);
      for (std::size_t k = 0; k < s; ++k) {
        complexd y = 0.0;
        for (std::size_t j = 0; j < s; ++j)
          y += im.gram_pinv(k, j) * frobenius_inner(im.basis[j], adj);
        c[k] = y;
        recon = recon + im.basis[k].scaled(y);
      }
      if (max_abs_diff(recon, adj) > tol.eps)
        fail(errc::not_adjoint_closed,
             "adjoint of basis element " + std::to_string(i) + " leaves the span");
    }
  }

  // Full-algebra basis, indexed: 0 -> identity; then for pairs i < j in
  // lexicographic order the Hermitian pair E_ij + E_ji, i(E_ij - E_ji);
  // then the traceless diagonals E_kk - E_{k+1,k+1}.
  static ComplexMatrix full_basis_element(std::size_t d, std::size_t idx) {
    if (idx >= d * d) fail(errc::invalid_argument, "basis index out of range");
    if (idx == 0) return ComplexMatrix::identity(d);
    const std::size_t npairs = d * (d - 1) / 2;
    if (idx <= 2 * npairs) {
      std::size_t pr = (idx - 1) / 2;
      const bool imag_part = ((idx - 1) % 2) == 1;
      std::size_t i = 0;
      std::size_t row_len = d - 1;
      while (pr >= row_len) {
        pr -= row_len;
        ++i;
        --row_len;
      }
      const std::size_t j = i + 1 + pr;
      ComplexMatrix m(d, d);
      if (!imag_part) {
        m(i, j) = 1.0;
        m(j, i) = 1.0;
      } else {
        m(i, j) = complexd(0.0, 1.0);
        m(j, i) = complexd(0.0, -1.0);
      }
      return m;
    }
    const std::size_t k = idx - 1 - 2 * npairs;
    ComplexMatrix m(d, d);
    m(k, k) = 1.0;
    m(k + 1, k + 1) = -1.0;
    return m;
  }

  // Exact coordinates of an ambient block; returns the squared residual.
  double block_coords(const ComplexMatrix& blk, std::span<complexd> out) const {
    const Impl& im = impl();
    const std::size_t d = im.ambient;
    if (im.full) {
      const std::size_t npairs = d * (d - 1) / 2;
      complexd tr = 0.0;
      for (std::size_t i = 0; i < d; ++i) tr += blk(i, i);
      out[0] = tr / double(d);
      std::size_t pr = 0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j, ++pr) {
          out[1 + 2 * pr] = 0.5 * (blk(i, j) + blk(j, i));
          out[2 + 2 * pr] = (blk(i, j) - blk(j, i)) / complexd(0.0, 2.0);
        }
      complexd acc = 0.0;
      for (std::size_t k = 0; k + 1 < d; ++k) {
        acc += blk(k, k) - out[0];
        out[1 + 2 * npairs + k] = acc;
      }
      return 0.0;
    }
    const std::size_t s = im.basis.size();
    std::vector<complexd> y(s);
    for (std::size_t j = 0; j < s; ++j) y[j] = frobenius_inner(im.basis[j], blk);
    ComplexMatrix recon(d, d);
    for (std::size_t k = 0; k < s; ++k) {
      complexd c = 0.0;
      for (std::size_t j = 0; j < s; ++j) c += im.gram_pinv(k, j) * y[j];
      out[k] = c;
      recon = recon + im.basis[k].scaled(c);
    }
    double res2 = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) res2 += std::norm(blk(i, j) - recon(i, j));
    return res2;
  }

  ComplexMatrix block_from_coords(std::span<const complexd> c) const {
    const Impl& im = impl();
    const std::size_t d = im.ambient;
    ComplexMatrix blk(d, d);
    if (im.full) {
      const std::size_t npairs = d * (d - 1) / 2;
      for (std::size_t i = 0; i < d; ++i) blk(i, i) = c[0];
      std::size_t pr = 0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j, ++pr) {
          const complexd a = c[1 + 2 * pr];
          const complexd b = c[2 + 2 * pr];
          blk(i, j) += a + complexd(0.0, 1.0) * b;
          blk(j, i) += a - complexd(0.0, 1.0) * b;
        }
      for (std::size_t k = 0; k + 1 < d; ++k) {
        const complexd g = c[1 + 2 * npairs + k];
        blk(k, k) += g;
        blk(k + 1, k + 1) -= g;
      }
      return blk;
    }
    for (std::size_t k = 0; k < im.basis.size(); ++k) blk = blk + im.basis[k].scaled(c[k]);
    return blk;
  }

  std::shared_ptr<const Impl> impl_;
};

/// An abstract matrix ordering: a level tester plus the designated order
/// unit (a level-1 ambient element).
struct ConeOracle {
  std::function<ConeVerdict(std::size_t level, const ComplexMatrix&)> level_tester;
  ComplexMatrix unit;

  ConeVerdict test(std::size_t level, const ComplexMatrix& m) const {
    return level_tester(level, m);
  }

  ComplexMatrix unit_at_level(std::size_t n) const {
    if (n == 0) fail(errc::invalid_argument, "matrix level must be >= 1");
    return kron(ComplexMatrix::identity(n), unit);
  }
};

/// The spectral ordering of a concrete system, packaged as an oracle.
inline ConeOracle concrete_cone_oracle(const ConcreteOperatorSystem& s, Tolerance tol = {}) {
  ConeOracle o;
  o.unit = s.unit();
  o.level_tester = [s, tol](std::size_t level, const ComplexMatrix& m) {
    return s.is_positive(level, m, tol);
  };
  return o;
}

/// Archimedeanization of an ordering, realized on a descending epsilon
/// ladder: u is Positive when eps*1_n + u passes the base test for the
/// smallest ladder entry, Unknown when only larger entries pass, and
/// NotPositive when every ladder entry fails.
inline ConeOracle archimedeanize(ConeOracle base, std::vector<double> ladder) {
  if (ladder.empty()) fail(errc::empty_ladder, "archimedeanization needs a nonempty ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0)) fail(errc::invalid_argument, "ladder entries must be positive");
    if (i > 0 && !(ladder[i] < ladder[i - 1]))
      fail(errc::invalid_argument, "ladder must be strictly descending");
  }
  ConeOracle out;
  out.unit = base.unit;
  out.level_tester = [base, ladder](std::size_t level, const ComplexMatrix& m) {
    const ComplexMatrix unit_n = base.unit_at_level(level);
    bool any_pass = false;
    bool smallest_pass = false;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const ConeVerdict v = base.test(level, m + unit_n.scaled(ladder[i]));
      if (v.positive()) {
        any_pass = true;
        if (i + 1 == ladder.size()) smallest_pass = true;
      }
    }
    ConeVerdict v;
    if (smallest_pass) {
      v.status = ConeStatus::positive;
      v.detail = "passed at ladder eps " + std::to_string(ladder.back());
    } else if (any_pass) {
      v.status = ConeStatus::unknown;
      v.detail = "passed only for larger ladder eps";
    } else {
      v.status = ConeStatus::not_positive;
      v.detail = "failed for every ladder eps";
    }
    return v;
  };
  return out;
}

/// Random positive element of M_level(S): a Gaussian Gram matrix when its
/// projection onto the system is faithful, otherwise rebuilt as a shifted
/// Hermitian span element (always a member, always PSD).
inline ComplexMatrix random_positive_element(const ConcreteOperatorSystem& s, std::size_t level,
                                             Rng& rng, Tolerance tol = {}) {
  const std::size_t n = level * s.ambient_dim();
  const ComplexMatrix w = random_psd(rng, n);
  const ComplexMatrix p = s.project(level, w).hermitized();
  if (max_abs_diff(p, w) <= tol.eps) return p;
  const ComplexMatrix h = s.project(level, random_hermitian(rng, n)).hermitized();
  const double lam = min_eigenvalue(h, tol);
  const double shift = std::max(0.0, -lam) + 0.1 * std::abs(rng.gaussian());
  return h + s.unit_at_level(level).scaled(shift);
}

/// The default epsilon ladder.
inline std::vector<double> default_ladder() { return {1e-3, 1e-6, 1e-9}; }

}  // namespace oslim
