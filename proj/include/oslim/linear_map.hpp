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

#include "oslim/operator_system.hpp"
#include "oslim/random.hpp"

namespace oslim {

enum class CpStatus { ucp, cp_not_unital, not_cp, unknown_up_to_level };

inline const char* cp_status_name(CpStatus s) {
  switch (s) {
    case CpStatus::ucp: return "UCP";
    case CpStatus::cp_not_unital: return "CPnotUnital";
    case CpStatus::not_cp: return "NotCP";
    case CpStatus::unknown_up_to_level: return "UnknownUpToLevel";
  }
  return "?";
}

/// Violation found by a positivity check on maps: `element` is an input at
/// `level`, both margins are minimal eigenvalues.
struct CpWitness {
  ComplexMatrix element;
  std::size_t level = 1;
  double element_min_eig = 0.0;
  double image_min_eig = 0.0;
  std::string direction;  // "forward" or "reflection"
};

struct CpVerdict {
  CpStatus status = CpStatus::unknown_up_to_level;
  bool unital = false;
  bool exact = false;  // true when decided by a Choi computation
  std::size_t checked_level = 0;
  std::optional<CpWitness> witness;
};

/// Linear map between concrete operator systems, determined by the images
/// of the domain basis. Two representations share one interface: explicit
/// image lists, and a structural level-1 action (used for canonical block
/// embeddings, whose image lists would not fit in memory at deep stages).
class LinearMap {
 public:
  LinearMap() = default;

  static LinearMap from_images(ConcreteOperatorSystem domain, ConcreteOperatorSystem codomain,
                               std::vector<ComplexMatrix> images, Tolerance tol = {}) {
    if (images.size() != domain.dim())
      fail(errc::dimension_mismatch,
           "expected " + std::to_string(domain.dim()) + " images, got " +
               std::to_string(images.size()));
    auto impl = std::make_shared<Impl>();
    impl->domain = std::move(domain);
    impl->codomain = std::move(codomain);
    impl->images = std::move(images);
    impl->tol = tol;
    for (std::size_t i = 0; i < impl->images.size(); ++i)
      validate_image(*impl, i, impl->images[i], tol);
    validate_adjoint_compat(*impl, tol);
    LinearMap f;
    f.impl_ = std::move(impl);
    return f;
  }

  static LinearMap identity(const ConcreteOperatorSystem& s) {
    auto impl = std::make_shared<Impl>();
    impl->domain = s;
    impl->codomain = s;
    impl->action = [](const ComplexMatrix& x) { return x; };
    LinearMap f;
    f.impl_ = std::move(impl);
    return f;
  }

  /// The canonical embedding M_d -> M_{copies*d}, x -> diag(x, ..., x).
  /// Requires full-algebra endpoints with matching dimensions.
  static LinearMap block_embedding(const ConcreteOperatorSystem& domain,
                                   const ConcreteOperatorSystem& codomain, std::size_t copies) {
    if (copies == 0) fail(errc::invalid_argument, "block embedding needs >= 1 copies");
    if (!domain.is_full_algebra() || !codomain.is_full_algebra())
      fail(errc::domain_not_full_algebra, "block embedding needs full matrix algebras");
    if (codomain.ambient_dim() != copies * domain.ambient_dim())
      fail(errc::dimension_mismatch, "codomain dimension must be copies * domain dimension");
    auto impl = std::make_shared<Impl>();
    impl->domain = domain;
    impl->codomain = codomain;
    const ComplexMatrix eye = ComplexMatrix::identity(copies);
    impl->action = [eye](const ComplexMatrix& x) { return kron(eye, x); };
    impl->block_copies = copies;
    LinearMap f;
    f.impl_ = std::move(impl);
    return f;
  }

  /// General structural map. The action is validated on the unit and on a
  /// deterministic sample of basis elements (all of them for small domains).
  static LinearMap from_action(ConcreteOperatorSystem domain, ConcreteOperatorSystem codomain,
                               std::function<ComplexMatrix(const ComplexMatrix&)> action,
                               Tolerance tol = {}) {
    auto impl = std::make_shared<Impl>();
    impl->domain = std::move(domain);
    impl->codomain = std::move(codomain);
    impl->action = std::move(action);
    impl->tol = tol;
    const std::size_t dim = impl->domain.dim();
    const std::size_t check_cap = 64;
    if (dim <= check_cap) {
      for (std::size_t i = 0; i < dim; ++i)
        validate_image(*impl, i, impl->action(impl->domain.basis_element(i)), tol);
      validate_adjoint_compat(*impl, tol);
    } else {
      for (std::size_t i = 0; i < check_cap; ++i) {
        const std::size_t idx = (i * (dim / check_cap)) % dim;
        const ComplexMatrix b = impl->domain.basis_element(idx);
        validate_image(*impl, idx, impl->action(b), tol);
        if (max_abs_diff(impl->action(b.adjoint()), impl->action(b).adjoint()) > tol.eps)
          fail(errc::not_adjoint_closed, "action does not commute with adjoints");
      }
    }
    LinearMap f;
    f.impl_ = std::move(impl);
    return f;
  }

  bool valid() const { return impl_ != nullptr; }
  const ConcreteOperatorSystem& domain() const { return impl().domain; }
  const ConcreteOperatorSystem& codomain() const { return impl().codomain; }
  bool is_structural() const { return static_cast<bool>(impl().action); }

  /// Number of diagonal copies when this is a canonical block embedding,
  /// 0 otherwise.
  std::size_t block_copies() const { return impl().block_copies; }

  /// Image of the i-th domain basis element.
  ComplexMatrix image(std::size_t i) const {
    const Impl& im = impl();
    if (!im.images.empty()) return im.images[i];
    return im.action(im.domain.basis_element(i));
  }

  /// Apply a single ambient block (level-1 element) without membership
  /// bookkeeping; used by apply() and the Choi construction.
  ComplexMatrix apply_block(const ComplexMatrix& blk) const {
    const Impl& im = impl();
    if (im.action) return im.action(blk);
    auto mem = im.domain.contains(1, blk);
    const std::size_t dc = im.codomain.ambient_dim();
    ComplexMatrix out(dc, dc);
    for (std::size_t i = 0; i < im.images.size(); ++i)
      out = out + im.images[i].scaled(mem.coords[i]);
    return out;
  }

  /// Linear extension to M_n(domain): the input must be a member within
  /// tol.eps (NotInSystem otherwise); each block is mapped by coordinates.
  ComplexMatrix apply(std::size_t level, const ComplexMatrix& m, Tolerance tol = {}) const {
    const Impl& im = impl();
    auto mem = im.domain.contains(level, m, tol);
    if (!mem.contained)
      fail(errc::not_in_system,
           "input residual " + std::to_string(mem.residual) + " exceeds tolerance");
    const std::size_t dd = im.domain.ambient_dim();
    const std::size_t dc = im.codomain.ambient_dim();
    ComplexMatrix out(level * dc, level * dc);
    for (std::size_t r = 0; r < level; ++r)
      for (std::size_t s = 0; s < level; ++s) {
        const ComplexMatrix blk = m.block(r * dd, s * dd, dd, dd);
        out.set_block(r * dc, s * dc, apply_block(blk));
      }
    return out;
  }

  bool unital(Tolerance tol = {}) const {
    return max_abs_diff(apply_block(impl().domain.unit()), impl().codomain.unit()) <= tol.eps;
  }

  /// Coordinate matrix (codomain.dim x domain.dim): column i holds the
  /// coordinates of image(i) in the codomain basis.
  ComplexMatrix coordinate_matrix() const {
    const Impl& im = impl();
    ComplexMatrix f(im.codomain.dim(), im.domain.dim());
    for (std::size_t i = 0; i < im.domain.dim(); ++i) {
      auto mem = im.codomain.contains(1, image(i));
      for (std::size_t k = 0; k < im.codomain.dim(); ++k) f(k, i) = mem.coords[k];
    }
    return f;
  }

 private:
  struct Impl {
    ConcreteOperatorSystem domain, codomain;
    std::vector<ComplexMatrix> images;  // explicit representation
    std::function<ComplexMatrix(const ComplexMatrix&)> action;  // structural representation
    std::size_t block_copies = 0;  // > 0 marks the canonical x -> kron(I, x)
    Tolerance tol;
  };

  const Impl& impl() const {
    if (!impl_) fail(errc::invalid_argument, "uninitialized linear map");
    return *impl_;
  }

  static void validate_image(const Impl& im, std::size_t i, const ComplexMatrix& img,
                             Tolerance tol) {
    const std::size_t dc = im.codomain.ambient_dim();
    if (img.rows() != dc || img.cols() != dc)
      fail(errc::dimension_mismatch,
           "image " + std::to_string(i) + " is " + img.shape_str() + ", codomain ambient is " +
               std::to_string(dc));
    auto mem = im.codomain.contains(1, img, tol);
    if (!mem.contained)
      fail(errc::not_in_system, "image " + std::to_string(i) + " leaves the codomain span");
  }

  // f(x*) = f(x)* on the basis. For explicit maps this is checked through
  // coordinates of the adjoint basis elements.
  static void validate_adjoint_compat(const Impl& im, Tolerance tol) {
    for (std::size_t i = 0; i < im.domain.dim(); ++i) {
      const ComplexMatrix b = im.domain.basis_element(i);
      const ComplexMatrix lhs = im.action ? im.action(b.adjoint()) : adjoint_image(im, i);
      const ComplexMatrix rhs =
          (im.action ? im.action(b) : im.images[i]).adjoint();
      if (max_abs_diff(lhs, rhs) > 10.0 * tol.eps)
        fail(errc::not_adjoint_closed,
             "map is not adjoint-compatible on basis element " + std::to_string(i));
    }
  }

  static ComplexMatrix adjoint_image(const Impl& im, std::size_t i) {
    const ComplexMatrix adj = im.domain.basis_element(i).adjoint();
    auto mem = im.domain.contains(1, adj);
    const std::size_t dc = im.codomain.ambient_dim();
    ComplexMatrix out(dc, dc);
    for (std::size_t k = 0; k < im.images.size(); ++k)
      out = out + im.images[k].scaled(mem.coords[k]);
    return out;
  }

  std::shared_ptr<const Impl> impl_;
};

/// compose(f, g): apply f first, then g. Requires codomain(f) = domain(g).
inline LinearMap compose(const LinearMap& f, const LinearMap& g, Tolerance tol = {}) {
  if (!f.codomain().same_system(g.domain(), tol))
    fail(errc::dimension_mismatch, "compose: codomain of the first map must match the domain "
                                   "of the second");
  if (f.block_copies() && g.block_copies())
    return LinearMap::block_embedding(f.domain(), g.codomain(),
                                      f.block_copies() * g.block_copies());
  if (f.is_structural()) {
    LinearMap ff = f, gg = g;
    return LinearMap::from_action(
        f.domain(), g.codomain(),
        [ff, gg](const ComplexMatrix& x) { return gg.apply_block(ff.apply_block(x)); }, tol);
  }
  std::vector<ComplexMatrix> images;
  images.reserve(f.domain().dim());
  for (std::size_t i = 0; i < f.domain().dim(); ++i) images.push_back(g.apply_block(f.image(i)));
  return LinearMap::from_images(f.domain(), g.codomain(), std::move(images), tol);
}

/// Composite along a chain: maps[k] connects stage k+1 to stage k+2
/// (1-based stages). path_compose(maps, p, q) returns the map from stage p
/// to stage q; p == q gives the identity on stage p's system.
inline LinearMap path_compose(std::span<const LinearMap> maps, std::size_t p, std::size_t q,
                              Tolerance tol = {}) {
  if (p == 0 || q < p) fail(errc::invalid_argument, "need 1 <= p <= q");
  if (q > maps.size() + 1) fail(errc::depth_exceeded, "path endpoint beyond the chain");
  if (p == q) {
    if (maps.empty()) fail(errc::invalid_argument, "path through an empty chain");
    return LinearMap::identity(p <= maps.size() ? maps[p - 1].domain()
                                                : maps[p - 2].codomain());
  }
  LinearMap acc = maps[p - 1];
  for (std::size_t k = p; k + 1 < q; ++k) acc = compose(acc, maps[k], tol);
  return acc;
}

/// Choi matrix [f(E_ij)]_{i,j} of a map whose domain spans a full matrix
/// algebra (DomainNotFullAlgebra otherwise).
inline ComplexMatrix choi_matrix(const LinearMap& f) {
  const std::size_t d = f.domain().ambient_dim();
  if (f.domain().dim() != d * d)
    fail(errc::domain_not_full_algebra,
         "choi matrix needs a domain spanning the full matrix algebra");
  const std::size_t dc = f.codomain().ambient_dim();
  ComplexMatrix choi(d * dc, d * dc);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      ComplexMatrix eij(d, d);
      eij(i, j) = 1.0;
      choi.set_block(i * dc, j * dc, f.apply_block(eij));
    }
  return choi;
}

/// The unnormalized maximally entangled element sum_ij E_ij (x) E_ij of
/// M_d(M_d): positive, and mapped to the Choi matrix by id (x) f.
inline ComplexMatrix max_entangled(std::size_t d) {
  ComplexMatrix m(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i * d + i, j * d + j) = 1.0;
  return m;
}

/// Complete-positivity / unitality verdict. Full-algebra domains are decided
/// exactly through the Choi matrix; proper subsystems are sampled with
/// `samples` positive elements per level up to `max_level`.
inline CpVerdict is_ucp(const LinearMap& f, std::size_t max_level = 3, std::size_t samples = 200,
                        std::uint64_t seed = 0, Tolerance tol = {}) {
  CpVerdict v;
  v.unital = f.unital(tol);
  const std::size_t d = f.domain().ambient_dim();
  if (f.domain().dim() == d * d) {
    const ComplexMatrix choi = choi_matrix(f);
    const double lam = min_eigenvalue(choi, tol);
    v.exact = true;
    v.checked_level = d;
    if (lam < -tol.eps) {
      v.status = CpStatus::not_cp;
      CpWitness w;
      w.element = max_entangled(d);
      w.level = d;
      w.element_min_eig = 0.0;
      w.image_min_eig = lam;
      w.direction = "forward";
      v.witness = std::move(w);
    } else {
      v.status = v.unital ? CpStatus::ucp : CpStatus::cp_not_unital;
    }
    return v;
  }
  Rng rng(seed);
  v.checked_level = max_level;
  for (std::size_t level = 1; level <= max_level; ++level) {
    for (std::size_t rep = 0; rep < samples; ++rep) {
      const ComplexMatrix u = random_positive_element(f.domain(), level, rng, tol);
      const ComplexMatrix img = f.apply(level, u, tol);
      const double lam = min_eigenvalue(img.hermitized(), tol);
      if (lam < -tol.eps) {
        v.status = CpStatus::not_cp;
        CpWitness w;
        w.element = u;
        w.level = level;
        w.element_min_eig = min_eigenvalue(u, tol);
        w.image_min_eig = lam;
        w.direction = "forward";
        v.witness = std::move(w);
        return v;
      }
    }
  }
  v.status = CpStatus::unknown_up_to_level;
  return v;
}

/// Sampled complete order monomorphism check: positivity must transfer in
/// both directions up to `max_level`. Requires coordinate injectivity
/// (NotInjective otherwise). A clean pass is reported as
/// UnknownUpToLevel with checked_level = max_level.
inline CpVerdict is_complete_order_mono(const LinearMap& f, std::size_t max_level = 3,
                                        std::size_t samples = 200, std::uint64_t seed = 0,
                                        Tolerance tol = {}) {
  const ComplexMatrix fm = f.coordinate_matrix();
  const ComplexMatrix gram = fm.adjoint() * fm;
  if (min_eigenvalue(gram, tol) <= tol.eps)
    fail(errc::not_injective, "map is not injective on coordinates");

  CpVerdict v;
  v.unital = f.unital(tol);
  v.checked_level = max_level;
  Rng rng(seed);
  const std::size_t dd = f.domain().ambient_dim();
  for (std::size_t level = 1; level <= max_level; ++level) {
    for (std::size_t rep = 0; rep < samples; ++rep) {
      // Alternate generic Hermitian elements with guaranteed-positive ones.
      ComplexMatrix u;
      if (rep % 2 == 0) {
        u = f.domain().project(level, random_hermitian(rng, level * dd)).hermitized();
      } else {
        u = random_positive_element(f.domain(), level, rng, tol);
      }
      const double in_eig = min_eigenvalue(u, tol);
      const ComplexMatrix img = f.apply(level, u, tol);
      const double out_eig = min_eigenvalue(img.hermitized(), tol);
      const bool in_pos = in_eig >= -tol.eps;
      const bool out_pos = out_eig >= -tol.eps;
      if (in_pos && !out_pos) {
        v.status = CpStatus::not_cp;
        CpWitness w;
        w.element = u;
        w.level = level;
        w.element_min_eig = in_eig;
        w.image_min_eig = out_eig;
        w.direction = "forward";
        v.witness = std::move(w);
        return v;
      }
      if (!in_pos && out_pos) {
        v.status = CpStatus::not_cp;
        CpWitness w;
        w.element = u;
        w.level = level;
        w.element_min_eig = in_eig;
        w.image_min_eig = out_eig;
        w.direction = "reflection";
        v.witness = std::move(w);
        return v;
      }
    }
  }
  v.status = CpStatus::unknown_up_to_level;
  return v;
}

}  // namespace oslim
