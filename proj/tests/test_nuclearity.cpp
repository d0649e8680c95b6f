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
#include <catch2/catch_amalgamated.hpp>

#include "oslim/nuclearity.hpp"
#include "oslim/uhf.hpp"
#include "support.hpp"

using namespace oslim;
using testsupport::diagonal_system;
using testsupport::pauli_system;

TEST_CASE("stage consistency for forwarded max generators", "[nuclearity]") {
  auto seq = uhf_sequence(GammaRule({2}), 3);
  SECTION("full matrix factor") {
    const auto rep = tensor_limit_consistency(seq, ConcreteOperatorSystem::full_matrix_algebra(2),
                                              1, 50, 5);
    CHECK(rep.samples == 50);
    CHECK(rep.forward_pass == 50);
    CHECK(rep.backward_found == 50);
    CHECK(rep.unknowns == 0);
  }
  SECTION("diagonal factor") {
    const auto rep = tensor_limit_consistency(seq, diagonal_system(), 1, 50, 5);
    CHECK(rep.forward_pass == 50);
    CHECK(rep.backward_found == 50);
  }
  SECTION("level two") {
    const auto rep = tensor_limit_consistency(seq, ConcreteOperatorSystem::full_matrix_algebra(2),
                                              2, 25, 5);
    CHECK(rep.forward_pass == 25);
    CHECK(rep.backward_found == 25);
  }
  SECTION("non-inclusion sequences are rejected") {
    auto diag2 = diagonal_system();
    auto avg = LinearMap::from_action(diag2, diag2, [](const ComplexMatrix& x) {
      const complexd mean = 0.5 * (x(0, 0) + x(1, 1));
      return ComplexMatrix::diagonal({mean, mean});
    });
    auto seq2 = InductiveSequence::from_stages({diag2, diag2}, {avg});
    try {
      tensor_limit_consistency(seq2, diag2, 1, 5, 0);
      FAIL("expected NotInclusionSequence");
    } catch (const error& e) {
      CHECK(e.code() == errc::not_inclusion_sequence);
    }
  }
}

TEST_CASE("min max sampling evidence", "[nuclearity]") {
  const auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
  SECTION("matrix algebra positive control") {
    const auto rep = minmax_nuclearity_evidence(m2, m2, 1, 50, {}, 3);
    CHECK(rep.forward_pass == 50);
    CHECK(rep.backward_found >= 45);
    CHECK(rep.backward_found + rep.unknowns == 50);
  }
  SECTION("scalar factors certify trivially") {
    const auto c1 = ConcreteOperatorSystem::full_matrix_algebra(1);
    const auto rep = minmax_nuclearity_evidence(c1, c1, 1, 20, {}, 3);
    CHECK(rep.forward_pass == 20);
    CHECK(rep.backward_found == 20);
  }
  SECTION("forward direction never fails across pairs") {
    const auto pairs = {std::make_pair(m2, diagonal_system()),
                        std::make_pair(diagonal_system(), diagonal_system()),
                        std::make_pair(pauli_system(), m2)};
    for (const auto& [s, t] : pairs) {
      for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto rep = minmax_nuclearity_evidence(s, t, 1, 20, {}, seed);
        CHECK(rep.forward_pass == 20);
      }
    }
  }
  SECTION("identical seeds give identical reports") {
    const auto a = minmax_nuclearity_evidence(m2, diagonal_system(), 1, 30, {}, 11);
    const auto b = minmax_nuclearity_evidence(m2, diagonal_system(), 1, 30, {}, 11);
    CHECK(a.forward_pass == b.forward_pass);
    CHECK(a.backward_found == b.backward_found);
    CHECK(a.unknowns == b.unknowns);
    CHECK(a.seed == b.seed);
    CHECK(a.level == b.level);
    CHECK(a.alpha == "min");
    CHECK(a.beta == "max");
  }
}
