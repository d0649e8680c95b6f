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
#ifndef OSLIM_INDUCTIVE_LIMIT_HPP
#define OSLIM_INDUCTIVE_LIMIT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oslim/linear_map.hpp"
#include "oslim/operator_system.hpp"

namespace oslim {

struct SequenceOptions {
  std::size_t depth = 8;          // deepest materializable stage
  std::size_t mono_level = 2;     // sampling level for inclusion certification
  std::size_t mono_samples = 40;
  std::size_t choi_cert_cap = 128;  // largest Choi side decided by eigenvalues
  std::uint64_t seed = 0;
  Tolerance tol{};
};

/// How a connecting map's complete positivity was certified at build time.
enum class StageCertKind { choi_exact, structural_isometry, sampled };

inline const char* stage_cert_kind_name(StageCertKind k) {
  switch (k) {
    case StageCertKind::choi_exact: return "ChoiExact";
    case StageCertKind::structural_isometry: return "StructuralIsometry";
    case StageCertKind::sampled: return "Sampled";
  }
  return "?";
}

struct StageCertificate {
  StageCertKind kind = StageCertKind::sampled;
  bool order_mono = false;
  std::size_t checked_level = 0;
};

/// Element of the limit in (stage, level, representative) normal form. The
/// representative lives in M_level(S_stage) and keeps the stage where it was
/// introduced; push-forwards return new elements.
struct LimitElement {
  std::size_t stage = 1;
  std::size_t level = 1;
  ComplexMatrix rep;
};

enum class LimitStatus { yes, no, unknown };

inline const char* limit_status_name(LimitStatus s) {
  switch (s) {
    case LimitStatus::yes: return "Yes";
    case LimitStatus::no: return "No";
    case LimitStatus::unknown: return "Unknown";
  }
  return "?";
}

struct LimitVerdict {
  LimitStatus status = LimitStatus::unknown;
  std::size_t stage_used = 0;
  double epsilon_used = 0.0;
  std::string detail;
};

/// Inductive sequence S_1 -> S_2 -> ... with unital CP connecting maps,
/// materialized lazily from generator procedures and memoized. When the
/// sequence is built as an inclusion sequence, every connecting map is
/// certified as a complete order monomorphism at materialization time.
class InductiveSequence {
 public:
  InductiveSequence() = default;

  static InductiveSequence generated(std::function<ConcreteOperatorSystem(std::size_t)> system_at,
                                     std::function<LinearMap(std::size_t)> connect_at,
                                     SequenceOptions opts = {}, bool inclusion_claimed = false,
                                     std::string name = "sequence") {
    if (opts.depth == 0) fail(errc::invalid_argument, "sequence depth must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->system_at = std::move(system_at);
    impl->connect_at = std::move(connect_at);
    impl->opts = opts;
    impl->inclusion = inclusion_claimed;
    impl->name = std::move(name);
    // Depth bounds the growth of the memo vectors, so reserving now keeps
    // every reference handed out by system()/connect() stable.
    impl->systems.reserve(opts.depth);
    impl->connects.reserve(opts.depth);
    impl->certificates.reserve(opts.depth);
    InductiveSequence s;
    s.impl_ = std::move(impl);
    s.system(1);
    return s;
  }

  static InductiveSequence from_stages(std::vector<ConcreteOperatorSystem> systems,
                                       std::vector<LinearMap> connect, SequenceOptions opts = {},
                                       bool inclusion_claimed = false,
                                       std::string name = "sequence") {
    if (systems.empty()) fail(errc::invalid_argument, "sequence needs at least one stage");
    if (connect.size() + 1 != systems.size())
      fail(errc::dimension_mismatch, "need exactly one connecting map between adjacent stages");
    opts.depth = systems.size();
    auto sys = std::make_shared<std::vector<ConcreteOperatorSystem>>(std::move(systems));
    auto con = std::make_shared<std::vector<LinearMap>>(std::move(connect));
    for (std::size_t k = 0; k + 1 < sys->size(); ++k) {
      if (!(*con)[k].domain().same_system((*sys)[k], opts.tol) ||
          !(*con)[k].codomain().same_system((*sys)[k + 1], opts.tol))
        fail(errc::dimension_mismatch,
             "connecting map " + std::to_string(k + 1) + " does not chain its stages");
    }
    return generated([sys](std::size_t k) { return (*sys)[k - 1]; },
                     [con](std::size_t k) { return (*con)[k - 1]; }, opts, inclusion_claimed,
                     std::move(name));
  }

  bool valid() const { return impl_ != nullptr; }
  std::size_t depth() const { return impl().opts.depth; }
  const SequenceOptions& options() const { return impl().opts; }
  bool inclusion_flag() const { return impl().inclusion; }
  const std::string& name() const { return impl().name; }

  /// Stage system S_k, 1-based, materialized and cached on first use.
  const ConcreteOperatorSystem& system(std::size_t k) const {
    const Impl& im = impl();
    if (k == 0) fail(errc::invalid_argument, "stages are 1-based");
    if (k > im.opts.depth)
      fail(errc::depth_exceeded,
           "stage " + std::to_string(k) + " beyond depth " + std::to_string(im.opts.depth));
    std::lock_guard<std::mutex> lock(im.mu);
    while (im.systems.size() < k) im.systems.push_back(im.system_at(im.systems.size() + 1));
    return im.systems[k - 1];
  }

  /// Connecting map phi_k : S_k -> S_{k+1}, 1-based; certified on first use.
  const LinearMap& connect(std::size_t k) const {
    const Impl& im = impl();
    if (k == 0) fail(errc::invalid_argument, "stages are 1-based");
    if (k + 1 > im.opts.depth)
      fail(errc::depth_exceeded, "connecting map " + std::to_string(k) + " needs stage " +
                                     std::to_string(k + 1) + " beyond depth " +
                                     std::to_string(im.opts.depth));
    system(k + 1);
    std::lock_guard<std::mutex> lock(im.mu);
    while (im.connects.size() < k) {
      const std::size_t next = im.connects.size() + 1;
      LinearMap f = im.connect_at(next);
      if (!f.domain().same_system(im.systems[next - 1], im.opts.tol) ||
          !f.codomain().same_system(im.systems[next], im.opts.tol))
        fail(errc::dimension_mismatch,
             "connecting map " + std::to_string(next) + " does not chain its stages");
      StageCertificate cert = certify(f, next, im);
      im.connects.push_back(std::move(f));
      im.certificates.push_back(cert);
    }
    return im.connects[k - 1];
  }

  const StageCertificate& certificate(std::size_t k) const {
    connect(k);
    return impl().certificates[k - 1];
  }

 private:
  struct Impl {
    std::function<ConcreteOperatorSystem(std::size_t)> system_at;
    std::function<LinearMap(std::size_t)> connect_at;
    SequenceOptions opts;
    bool inclusion = false;
    std::string name;
    mutable std::mutex mu;
    mutable std::vector<ConcreteOperatorSystem> systems;
    mutable std::vector<LinearMap> connects;
    mutable std::vector<StageCertificate> certificates;
  };

  const Impl& impl() const {
    if (!impl_) fail(errc::invalid_argument, "uninitialized inductive sequence");
    return *impl_;
  }

  // Build-time certification of one connecting map. Canonical block
  // embeddings are certified through their isometry identities (exact at
  // every level); small maps through the Choi matrix; large general maps by
  // sampling. A claimed inclusion that fails its check aborts the build.
  static StageCertificate certify(const LinearMap& f, std::size_t k, const Impl& im) {
    const Tolerance tol = im.opts.tol;
    if (!f.unital(tol))
      fail(errc::invalid_argument, "connecting map " + std::to_string(k) + " is not unital");
    StageCertificate cert;
    if (const std::size_t copies = f.block_copies()) {
      // phi(x) = sum_s V_s x V_s^* with V_s the s-th block isometry; these
      // satisfy V_s^* V_t = delta_st * I, which forces complete positivity
      // and spectrum preservation. Verify the action matches on samples.
      Rng rng(im.opts.seed + k);
      const std::size_t d = f.domain().ambient_dim();
      const ComplexMatrix eye = ComplexMatrix::identity(copies);
      for (int rep = 0; rep < 2; ++rep) {
        const ComplexMatrix x = random_gaussian_matrix(rng, d, d);
        if (max_abs_diff(f.apply_block(x), kron(eye, x)) > tol.eps)
          fail(errc::invalid_argument,
               "connecting map " + std::to_string(k) + " is not the canonical block embedding");
      }
      cert.kind = StageCertKind::structural_isometry;
      cert.order_mono = true;
      cert.checked_level = 0;  // exact at every level
      return cert;
    }
    const std::size_t choi_side = f.domain().ambient_dim() * f.codomain().ambient_dim();
    if (f.domain().dim() == f.domain().ambient_dim() * f.domain().ambient_dim() &&
        choi_side <= im.opts.choi_cert_cap) {
      const CpVerdict v = is_ucp(f, 1, 0, im.opts.seed, tol);
      if (v.status != CpStatus::ucp)
        fail(errc::invalid_argument,
             "connecting map " + std::to_string(k) + " is not UCP: " + cp_status_name(v.status));
      cert.kind = StageCertKind::choi_exact;
    } else {
      // Too large for an exact Choi decision: push positive samples through
      // the map directly (calling is_ucp here would still build the Choi for
      // full-algebra domains).
      Rng rng(im.opts.seed + k);
      for (std::size_t i = 0; i < im.opts.mono_samples; ++i) {
        const ComplexMatrix u = random_positive_element(f.domain(), 1, rng, tol);
        if (min_eigenvalue(f.apply_block(u).hermitized(), tol) < -tol.eps)
          fail(errc::invalid_argument,
               "connecting map " + std::to_string(k) + " failed CP sampling");
      }
      cert.kind = StageCertKind::sampled;
      cert.checked_level = 1;
    }
    if (im.inclusion) {
      if (f.domain().dim() <= 256 && f.codomain().dim() <= 256) {
        CpVerdict mono;
        try {
          mono = is_complete_order_mono(f, im.opts.mono_level, im.opts.mono_samples,
                                        im.opts.seed + k, tol);
        } catch (const error& err) {
          if (err.code() != errc::not_injective) throw;
          fail(errc::not_inclusion_sequence,
               "claimed inclusion is not injective at stage " + std::to_string(k));
        }
        if (mono.status != CpStatus::unknown_up_to_level)
          fail(errc::not_inclusion_sequence,
               "claimed inclusion fails order-monomorphism sampling at stage " +
                   std::to_string(k));
        cert.order_mono = true;
        cert.checked_level = std::max(cert.checked_level, mono.checked_level);
      } else {
        // Coordinate-level injectivity is out of reach at this size; check
        // the two cone directions on level-1 samples instead.
        Rng rng(im.opts.seed + 7 * k);
        const std::size_t d = f.domain().ambient_dim();
        for (std::size_t i = 0; i < im.opts.mono_samples; ++i) {
          const ComplexMatrix u = f.domain().project(1, random_hermitian(rng, d)).hermitized();
          const bool in_pos = min_eigenvalue(u, tol) >= -tol.eps;
          const bool out_pos = min_eigenvalue(f.apply_block(u).hermitized(), tol) >= -tol.eps;
          if (in_pos != out_pos)
            fail(errc::not_inclusion_sequence,
                 "claimed inclusion fails cone sampling at stage " + std::to_string(k));
        }
        cert.order_mono = true;
        cert.checked_level = std::max<std::size_t>(cert.checked_level, 1);
      }
    }
    return cert;
  }

  std::shared_ptr<const Impl> impl_;
};

/// Validated (stage, level, representative) element of the limit.
inline LimitElement canonical_injection(const InductiveSequence& seq, std::size_t k,
                                        const ComplexMatrix& x, Tolerance tol = {}) {
  const ConcreteOperatorSystem& s = seq.system(k);
  const std::size_t d = s.ambient_dim();
  if (x.rows() != x.cols() || x.rows() == 0 || x.rows() % d != 0)
    fail(errc::dimension_mismatch, "element shape " + x.shape_str() +
                                       " is not a matrix level over ambient dimension " +
                                       std::to_string(d));
  const std::size_t level = x.rows() / d;
  auto mem = s.contains(level, x, tol);
  if (!mem.contained)
    fail(errc::not_in_system,
         "representative residual " + std::to_string(mem.residual) + " at stage " +
             std::to_string(k));
  return LimitElement{k, level, x};
}

/// Forward e along the connecting maps to stage p >= e.stage.
inline LimitElement push_forward(const InductiveSequence& seq, const LimitElement& e,
                                 std::size_t p, Tolerance tol = {}) {
  if (p < e.stage) fail(errc::invalid_argument, "cannot push backwards");
  if (p > seq.depth())
    fail(errc::depth_exceeded,
         "stage " + std::to_string(p) + " beyond depth " + std::to_string(seq.depth()));
  LimitElement out = e;
  for (std::size_t k = e.stage; k < p; ++k) {
    out.rep = seq.connect(k).apply(out.level, out.rep, tol);
    out.stage = k + 1;
  }
  return out;
}

namespace detail {

inline std::size_t default_horizon(const InductiveSequence& seq, std::size_t from) {
  return std::min(seq.depth(), from + 8);
}

}  // namespace detail

/// Equality of limit elements: Yes when the push-forwards meet within eps at
/// some stage up to the horizon. For inclusion sequences agreement at
/// max(stage1, stage2) is necessary and sufficient, so No becomes certified;
/// otherwise an exhausted horizon yields Unknown.
inline LimitVerdict limit_eq(const InductiveSequence& seq, const LimitElement& e1,
                             const LimitElement& e2, std::size_t horizon = 0,
                             Tolerance tol = {}) {
  if (e1.level != e2.level)
    fail(errc::level_mismatch, "limit equality needs equal matrix levels");
  const std::size_t base = std::max(e1.stage, e2.stage);
  if (horizon == 0) horizon = detail::default_horizon(seq, base);
  if (horizon > seq.depth())
    fail(errc::depth_exceeded, "horizon " + std::to_string(horizon) + " beyond depth " +
                                   std::to_string(seq.depth()));
  LimitElement a = push_forward(seq, e1, base, tol);
  LimitElement b = push_forward(seq, e2, base, tol);
  LimitVerdict v;
  for (std::size_t p = base;; ++p) {
    const double gap = max_abs_diff(a.rep, b.rep);
    if (gap <= tol.eps) {
      v.status = LimitStatus::yes;
      v.stage_used = p;
      v.detail = "representatives agree within eps";
      return v;
    }
    if (seq.inclusion_flag()) {
      v.status = LimitStatus::no;
      v.stage_used = p;
      v.detail = "inclusion sequence: disagreement at the joint stage is final";
      return v;
    }
    if (p >= horizon) break;
    a = push_forward(seq, a, p + 1, tol);
    b = push_forward(seq, b, p + 1, tol);
  }
  v.status = LimitStatus::unknown;
  v.stage_used = horizon;
  v.detail = "horizon exhausted without agreement";
  return v;
}

/// Positivity of e in the Archimedeanized limit cone: scan stages up to the
/// horizon; at each stage run the exact test first and then the epsilon
/// ladder. Yes requires the exact test or the smallest ladder entry. For
/// inclusion sequences positivity is stage-invariant, so the verdict is
/// decided at e's own stage, with No certified below the largest ladder
/// entry.
inline LimitVerdict limit_positive(const InductiveSequence& seq, const LimitElement& e,
                                   std::size_t horizon = 0,
                                   const std::vector<double>& ladder = default_ladder(),
                                   Tolerance tol = {}) {
  if (!e.rep.is_hermitian(tol))
    fail(errc::not_hermitian, "limit positivity needs a Hermitian representative");
  if (ladder.empty()) fail(errc::empty_ladder, "ladder must be non-empty");
  if (horizon == 0) horizon = detail::default_horizon(seq, e.stage);
  if (horizon < e.stage) fail(errc::invalid_argument, "horizon before the element's stage");
  if (horizon > seq.depth())
    fail(errc::depth_exceeded, "horizon " + std::to_string(horizon) + " beyond depth " +
                                   std::to_string(seq.depth()));
  const double eps_small = *std::min_element(ladder.begin(), ladder.end());
  const double eps_large = *std::max_element(ladder.begin(), ladder.end());
  LimitVerdict v;
  bool saw_unknown = false;
  LimitElement cur = e;
  const std::size_t last = seq.inclusion_flag() ? e.stage : horizon;
  for (std::size_t l = e.stage; l <= last; ++l) {
    if (l > cur.stage) cur = push_forward(seq, cur, l, tol);
    const ConcreteOperatorSystem& s = seq.system(l);
    const ConeVerdict exact = s.is_positive(cur.level, cur.rep.hermitized(), tol);
    if (exact.status == ConeStatus::positive) {
      v.status = LimitStatus::yes;
      v.stage_used = l;
      v.epsilon_used = 0.0;
      v.detail = "exact stage positivity";
      return v;
    }
    const ConeOracle oracle = concrete_cone_oracle(s, tol);
    const ConeVerdict arch = archimedeanize(oracle, ladder).test(cur.level, cur.rep.hermitized());
    if (arch.status == ConeStatus::positive) {
      v.status = LimitStatus::yes;
      v.stage_used = l;
      v.epsilon_used = eps_small;
      v.detail = "Archimedean stage positivity at the smallest ladder entry";
      return v;
    }
    if (arch.status == ConeStatus::unknown) saw_unknown = true;
    if (seq.inclusion_flag()) {
      const double margin = exact.witness.value_or(0.0);
      if (!saw_unknown && margin < -eps_large) {
        v.status = LimitStatus::no;
        v.stage_used = l;
        v.detail = "inclusion sequence: eigenvalue margin below every ladder entry";
        return v;
      }
      break;
    }
  }
  v.status = LimitStatus::unknown;
  v.stage_used = last;
  v.detail = saw_unknown ? "only coarse ladder entries succeed" : "horizon exhausted";
  return v;
}

/// Pointwise *-vector-space operations, aligning stages by push-forward.
inline LimitElement limit_add(const InductiveSequence& seq, const LimitElement& e1,
                              const LimitElement& e2, Tolerance tol = {}) {
  if (e1.level != e2.level) fail(errc::level_mismatch, "limit addition needs equal levels");
  const std::size_t p = std::max(e1.stage, e2.stage);
  LimitElement a = push_forward(seq, e1, p, tol);
  const LimitElement b = push_forward(seq, e2, p, tol);
  a.rep = a.rep + b.rep;
  return a;
}

inline LimitElement limit_scale(const LimitElement& e, complexd c) {
  return LimitElement{e.stage, e.level, e.rep.scaled(c)};
}

inline LimitElement limit_adjoint(const LimitElement& e) {
  return LimitElement{e.stage, e.level, e.rep.adjoint()};
}

/// The universal UCP map out of the limit induced by a compatible family
/// psi[k] : S_{k+1} -> target (0-based list for 1-based stages). The
/// defining triangles psi_{k+1} . phi_k = psi_k are checked eagerly on every
/// basis element; violations name the stage and basis index.
class UniversalMap {
 public:
  UniversalMap(InductiveSequence seq, ConcreteOperatorSystem target, std::vector<LinearMap> psi,
               std::size_t depth = 0, Tolerance tol = {})
      : seq_(std::move(seq)), target_(std::move(target)), psi_(std::move(psi)) {
    if (depth == 0) depth = psi_.size();
    if (depth == 0 || depth > seq_.depth() || depth > psi_.size())
      fail(errc::invalid_argument, "universal family depth out of range");
    depth_ = depth;
    for (std::size_t k = 1; k <= depth_; ++k) {
      if (!psi_[k - 1].domain().same_system(seq_.system(k), tol))
        fail(errc::incompatible_family,
             "family map " + std::to_string(k) + " is not defined on stage " + std::to_string(k));
      if (!psi_[k - 1].codomain().same_system(target_, tol))
        fail(errc::incompatible_family,
             "family map " + std::to_string(k) + " does not land in the target");
    }
    for (std::size_t k = 1; k < depth_; ++k) {
      const ConcreteOperatorSystem& s = seq_.system(k);
      const LinearMap& phi = seq_.connect(k);
      for (std::size_t i = 0; i < s.dim(); ++i) {
        const ComplexMatrix x = s.basis_element(i);
        const ComplexMatrix via = psi_[k].apply_block(phi.apply_block(x));
        const ComplexMatrix direct = psi_[k - 1].apply_block(x);
        if (max_abs_diff(via, direct) > tol.eps)
          fail(errc::incompatible_family, "triangle fails at stage " + std::to_string(k) +
                                              ", basis element " + std::to_string(i));
      }
    }
  }

  const ConcreteOperatorSystem& target() const { return target_; }
  std::size_t depth() const { return depth_; }

  ComplexMatrix operator()(const LimitElement& e, Tolerance tol = {}) const {
    if (e.stage > depth_)
      fail(errc::depth_exceeded, "element stage beyond the compatible family");
    return psi_[e.stage - 1].apply(e.level, e.rep, tol);
  }

 private:
  InductiveSequence seq_;
  ConcreteOperatorSystem target_;
  std::vector<LinearMap> psi_;
  std::size_t depth_ = 0;
};

/// The induced map between two limits from stagewise maps pi[k] making the
/// squares pi_{k+1} . phiS_k = phiT_k . pi_k commute on every basis element.
class InducedMap {
 public:
  InducedMap(InductiveSequence source, InductiveSequence target, std::vector<LinearMap> pi,
             std::size_t depth = 0, Tolerance tol = {})
      : source_(std::move(source)), target_(std::move(target)), pi_(std::move(pi)) {
    if (depth == 0) depth = pi_.size();
    if (depth == 0 || depth > source_.depth() || depth > target_.depth() || depth > pi_.size())
      fail(errc::invalid_argument, "induced family depth out of range");
    depth_ = depth;
    for (std::size_t k = 1; k <= depth_; ++k) {
      if (!pi_[k - 1].domain().same_system(source_.system(k), tol) ||
          !pi_[k - 1].codomain().same_system(target_.system(k), tol))
        fail(errc::incompatible_square,
             "stage map " + std::to_string(k) + " does not connect the two stage systems");
    }
    for (std::size_t k = 1; k < depth_; ++k) {
      const ConcreteOperatorSystem& s = source_.system(k);
      const LinearMap& phi_s = source_.connect(k);
      const LinearMap& phi_t = target_.connect(k);
      for (std::size_t i = 0; i < s.dim(); ++i) {
        const ComplexMatrix x = s.basis_element(i);
        const ComplexMatrix via_source = pi_[k].apply_block(phi_s.apply_block(x));
        const ComplexMatrix via_target = phi_t.apply_block(pi_[k - 1].apply_block(x));
        if (max_abs_diff(via_source, via_target) > tol.eps)
          fail(errc::incompatible_square, "square fails at stage " + std::to_string(k) +
                                              ", basis element " + std::to_string(i));
      }
    }
  }

  std::size_t depth() const { return depth_; }

  LimitElement operator()(const LimitElement& e, Tolerance tol = {}) const {
    if (e.stage > depth_)
      fail(errc::depth_exceeded, "element stage beyond the compatible family");
    return LimitElement{e.stage, e.level, pi_[e.stage - 1].apply(e.level, e.rep, tol)};
  }

 private:
  InductiveSequence source_, target_;
  std::vector<LinearMap> pi_;
  std::size_t depth_ = 0;
};

}  // namespace oslim

#endif  // OSLIM_INDUCTIVE_LIMIT_HPP
