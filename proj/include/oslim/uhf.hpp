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
#ifndef OSLIM_UHF_HPP
#define OSLIM_UHF_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "oslim/inductive_limit.hpp"
#include "oslim/linear_map.hpp"
#include "oslim/operator_system.hpp"

namespace oslim {

/// Multiplicity rule gamma(1), gamma(2), ... for a UHF tower of matrix
/// algebras M_{gamma!(n)} with gamma!(n) = gamma(1) * ... * gamma(n). A rule
/// shorter than the requested index repeats its last entry.
struct GammaRule {
  std::vector<std::size_t> gamma;
  std::size_t size_cap = 256;

  explicit GammaRule(std::vector<std::size_t> g, std::size_t cap = 256)
      : gamma(std::move(g)), size_cap(cap) {
    if (gamma.empty()) fail(errc::invalid_argument, "gamma rule must be non-empty");
    for (std::size_t v : gamma)
      if (v < 1) fail(errc::invalid_argument, "gamma entries must be >= 1");
  }

  std::size_t at(std::size_t n) const {
    if (n == 0) fail(errc::invalid_argument, "gamma indices are 1-based");
    return n <= gamma.size() ? gamma[n - 1] : gamma.back();
  }

  /// gamma!(n), guarded by the size cap (SizeCapExceeded beyond it).
  std::size_t factorial(std::size_t n) const {
    if (n == 0) fail(errc::invalid_argument, "gamma indices are 1-based");
    std::size_t acc = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      const std::size_t g = at(i);
      if (g > size_cap / acc)
        fail(errc::size_cap_exceeded, "gamma!(" + std::to_string(i) + ") exceeds the size cap " +
                                          std::to_string(size_cap));
      acc *= g;
    }
    return acc;
  }
};

/// The tower M_{gamma!(1)} -> M_{gamma!(2)} -> ... with canonical
/// block-diagonal embeddings x -> diag(x, ..., x). Every connecting map is an
/// inclusion, certified at build time.
inline InductiveSequence uhf_sequence(const GammaRule& rule, std::size_t depth,
                                      SequenceOptions opts = {}) {
  if (depth == 0) fail(errc::invalid_argument, "depth must be >= 1");
  rule.factorial(depth);  // SizeCapExceeded before any stage is built
  opts.depth = depth;
  GammaRule r = rule;
  return InductiveSequence::generated(
      [r](std::size_t k) {
        return ConcreteOperatorSystem::full_matrix_algebra(r.factorial(k));
      },
      [r](std::size_t k) {
        return LinearMap::block_embedding(
            ConcreteOperatorSystem::full_matrix_algebra(r.factorial(k)),
            ConcreteOperatorSystem::full_matrix_algebra(r.factorial(k + 1)), r.at(k + 1));
      },
      opts, /*inclusion_claimed=*/true, "uhf");
}

/// Stagewise comparison of limit positivity against direct stage positivity
/// for sampled Hermitian elements. Verdicts must coincide whenever the limit
/// answer is decisive; Unknown verdicts (margins inside the ladder) are
/// recorded as skipped, not as discrepancies.
struct UhfMonoReport {
  std::size_t stages = 0;
  std::size_t level_max = 0;
  std::size_t samples_per_cell = 0;
  std::size_t checked = 0;
  std::size_t discrepancies = 0;
  std::size_t skipped = 0;
  bool passed() const { return discrepancies == 0 && checked > 0; }
};

inline UhfMonoReport verify_order_mono_injection(const GammaRule& rule, std::size_t depth,
                                                 std::size_t level_max, std::size_t samples,
                                                 std::uint64_t seed, SequenceOptions opts = {},
                                                 Tolerance tol = {}) {
  const InductiveSequence seq = uhf_sequence(rule, depth, opts);
  UhfMonoReport report;
  report.stages = depth;
  report.level_max = level_max;
  report.samples_per_cell = samples;
  Rng rng(seed);
  for (std::size_t k = 1; k <= depth; ++k) {
    const ConcreteOperatorSystem& s = seq.system(k);
    const std::size_t d = s.ambient_dim();
    for (std::size_t level = 1; level <= level_max; ++level) {
      for (std::size_t i = 0; i < samples; ++i) {
        ComplexMatrix x = random_hermitian(rng, level * d);
        if (i % 2 == 1) {
          // Alternate in guaranteed-positive samples so the Yes direction is
          // exercised as often as the No direction.
          const double lo = min_eigenvalue(x, tol);
          x = x + ComplexMatrix::identity(level * d).scaled(std::max(0.0, -lo) + 0.01);
        }
        const bool direct = s.is_positive(level, x, tol).positive();
        const LimitVerdict lim =
            limit_positive(seq, LimitElement{k, level, x}, depth, default_ladder(), tol);
        if (lim.status == LimitStatus::unknown) {
          ++report.skipped;
          continue;
        }
        ++report.checked;
        const bool limit_yes = lim.status == LimitStatus::yes;
        if (limit_yes != direct) ++report.discrepancies;
      }
    }
  }
  return report;
}

}  // namespace oslim

#endif  // OSLIM_UHF_HPP
