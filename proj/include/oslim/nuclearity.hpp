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
#ifndef OSLIM_NUCLEARITY_HPP
#define OSLIM_NUCLEARITY_HPP

#include <cstddef>
#include <cstdint>
#include <string>

#include "oslim/inductive_limit.hpp"
#include "oslim/tensor.hpp"

namespace oslim {

/// Aggregate evidence for agreement of the min and max cones. The forward
/// count tracks max-generated elements confirmed spatially positive (a
/// theorem, so anything below samples is a bug); the backward count tracks
/// sampled min-positive elements for which a max certificate was produced.
/// Backward rates are calibration evidence, never a proof of nuclearity.
struct NuclearityReport {
  std::string alpha = "min";
  std::string beta = "max";
  std::size_t level = 1;
  std::size_t samples = 0;
  std::size_t forward_pass = 0;
  std::size_t backward_found = 0;
  std::size_t unknowns = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// (phi (x) id_T) at matrix level n: slice out the left spatial leg for each
// fixed (row, right, row', right') combination, map it through phi, and
// reassemble. Slices of a joint-span element stay inside span(domain), so the
// coordinate extension of phi applies to them exactly.
inline ComplexMatrix push_left_factor(const LinearMap& phi, std::size_t n, std::size_t dr,
                                      const ComplexMatrix& w) {
  const std::size_t dl = phi.domain().ambient_dim();
  const std::size_t dl2 = phi.codomain().ambient_dim();
  ComplexMatrix out(n * dl2 * dr, n * dl2 * dr);
  ComplexMatrix slice(dl, dl);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t r2 = 0; r2 < n; ++r2)
      for (std::size_t b = 0; b < dr; ++b)
        for (std::size_t b2 = 0; b2 < dr; ++b2) {
          for (std::size_t a = 0; a < dl; ++a)
            for (std::size_t a2 = 0; a2 < dl; ++a2)
              slice(a, a2) = w((r * dl + a) * dr + b, (r2 * dl + a2) * dr + b2);
          const ComplexMatrix img = phi.apply_block(slice);
          for (std::size_t a = 0; a < dl2; ++a)
            for (std::size_t a2 = 0; a2 < dl2; ++a2)
              out((r * dl2 + a) * dr + b, (r2 * dl2 + a2) * dr + b2) = img(a, a2);
        }
  return out;
}

// A max generator with small random positive factors and a Gaussian scalar
// compression; the attached certificate is exact by construction.
inline TensorElement random_max_generator(const ConcreteOperatorSystem& left,
                                          const ConcreteOperatorSystem& right, std::size_t n,
                                          Rng& rng, Tolerance tol) {
  const std::size_t l = 1 + rng.pick(2);
  const std::size_t m = 1 + rng.pick(2);
  const ComplexMatrix P = random_positive_element(left, l, rng, tol);
  const ComplexMatrix Q = random_positive_element(right, m, rng, tol);
  const ComplexMatrix alpha = random_gaussian_matrix(rng, n, l * m);
  return max_generate(left, right, n, alpha, P, Q, tol);
}

// A strictly min-positive element of M_n(span(left) (x) span(right)): project
// a Gaussian Hermitian onto the joint span and shift it above zero by a
// random margin.
inline TensorElement random_min_positive(const ConcreteOperatorSystem& left,
                                         const ConcreteOperatorSystem& right, std::size_t n,
                                         Rng& rng, Tolerance tol) {
  const std::size_t side = n * left.ambient_dim() * right.ambient_dim();
  const ComplexMatrix h =
      tensor_project(left, right, n, random_hermitian(rng, side)).hermitized();
  const double lam = min_eigenvalue(h, tol);
  const double shift = std::max(0.0, -lam) + 0.05 + 0.1 * std::abs(rng.gaussian());
  return make_tensor_element(left, right, n,
                             h + tensor_unit(left, right, n).scaled(shift), tol);
}

}  // namespace detail

/// Finite-stage commuting-square harness for an inclusion sequence: sample
/// max generators of M_n(S_k (x) T), rotate k over the pushable stages, and
/// verify each generator stays min-positive and keeps a valid max certificate
/// after forwarding the left factor one stage. forward_pass counts samples
/// positive at both stages; backward_found counts certificates that survive
/// the push unchanged up to the left-factor forwarding.
inline NuclearityReport tensor_limit_consistency(const InductiveSequence& seq,
                                                 const ConcreteOperatorSystem& T, std::size_t n,
                                                 std::size_t samples, std::uint64_t seed = 0,
                                                 Tolerance tol = {}) {
  if (!seq.inclusion_flag())
    fail(errc::not_inclusion_sequence, "the stage consistency harness needs an inclusion sequence");
  if (seq.depth() < 2)
    fail(errc::invalid_argument, "need at least two stages to forward a generator");
  NuclearityReport rep;
  rep.level = n;
  rep.samples = samples;
  rep.seed = seed;
  Rng rng(seed);
  const std::size_t dr = T.ambient_dim();
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t k = 1 + (i % (seq.depth() - 1));
    const ConcreteOperatorSystem& S = seq.system(k);
    const TensorElement u = detail::random_max_generator(S, T, n, rng, tol);
    const bool pos_here = min_positive(u, tol).status == ConeStatus::positive;

    const LinearMap& phi = seq.connect(k);
    const ComplexMatrix pushed = detail::push_left_factor(phi, n, dr, u.matrix());
    MaxCertificate cert = *u.certificate();
    cert.P = phi.apply(cert.l, cert.P, tol);
    const TensorElement fwd(seq.system(k + 1), T, n, pushed, cert);
    const bool pos_there = min_positive(fwd, tol).status == ConeStatus::positive;
    const bool cert_there = certificate_valid(fwd, cert, tol);

    if (pos_here && pos_there) ++rep.forward_pass;
    if (cert_there) ++rep.backward_found;
    if (!pos_here || !pos_there || !cert_there) ++rep.unknowns;
  }
  return rep;
}

/// Two-sided sampling evidence for min = max on M_n(S (x) T). The forward
/// half feeds max generators to the min test; the backward half feeds
/// min-positive samples to the certificate search. Certificate rates are
/// reported, not asserted: a full matrix algebra factor is the positive
/// control with an expected high rate.
inline NuclearityReport minmax_nuclearity_evidence(const ConcreteOperatorSystem& S,
                                                   const ConcreteOperatorSystem& T, std::size_t n,
                                                   std::size_t samples,
                                                   const SearchBudget& budget = {},
                                                   std::uint64_t seed = 0, Tolerance tol = {}) {
  NuclearityReport rep;
  rep.level = n;
  rep.samples = samples;
  rep.seed = seed;
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const TensorElement u = detail::random_max_generator(S, T, n, rng, tol);
    if (min_positive(u, tol).status == ConeStatus::positive) ++rep.forward_pass;
  }
  for (std::size_t i = 0; i < samples; ++i) {
    const TensorElement u = detail::random_min_positive(S, T, n, rng, tol);
    SearchBudget b = budget;
    b.seed = seed + 1000 + i;
    if (max_certificate_search(u, default_ladder(), b, tol))
      ++rep.backward_found;
    else
      ++rep.unknowns;
  }
  return rep;
}

}  // namespace oslim

#endif  // OSLIM_NUCLEARITY_HPP
