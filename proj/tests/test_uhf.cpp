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

#include "oslim/uhf.hpp"
#include "support.hpp"

using namespace oslim;

namespace {

InductiveSequence doubling(std::size_t depth) {
  SequenceOptions opts;
  opts.depth = depth;
  return uhf_sequence(GammaRule({2}), depth, opts);
}

}  // namespace

TEST_CASE("uhf tower shapes and reports", "[uhf]") {
  SECTION("gamma factorials and the size cap") {
    GammaRule rule({2});
    CHECK(rule.factorial(3) == 8);
    CHECK(rule.factorial(8) == 256);
    CHECK_THROWS_AS(rule.factorial(9), error);
    GammaRule mixed({2, 3});
    CHECK(mixed.factorial(2) == 6);
    CHECK(mixed.at(5) == 3);
    CHECK_THROWS_AS(GammaRule({2, 0}), error);
  }
  SECTION("depth-3 doubling tower has sizes 2, 4, 8") {
    auto seq = doubling(3);
    CHECK(seq.system(1).ambient_dim() == 2);
    CHECK(seq.system(2).ambient_dim() == 4);
    CHECK(seq.system(3).ambient_dim() == 8);
    for (std::size_t k = 1; k < 3; ++k) {
      const ComplexMatrix c = choi_matrix(seq.connect(k));
      CHECK(is_psd(c));
    }
  }
  SECTION("constant gamma of one gives a constant tower") {
    auto seq = uhf_sequence(GammaRule({1}), 3);
    CHECK(seq.system(3).ambient_dim() == 1);
    Rng rng(2);
    const ComplexMatrix x = random_gaussian_matrix(rng, 1, 1);
    CHECK(max_abs_diff(seq.connect(1).apply(1, x), x) == 0.0);
  }
  SECTION("order-monomorphism verification finds no discrepancies") {
    const auto report = verify_order_mono_injection(GammaRule({2}), 3, 2, 30, 11);
    CHECK(report.checked > 0);
    CHECK(report.discrepancies == 0);
  }
  SECTION("unit and sign matrix agree between limit and stage verdicts") {
    auto seq = doubling(3);
    auto unit = canonical_injection(seq, 1, ComplexMatrix::identity(2));
    CHECK(limit_positive(seq, unit).status == LimitStatus::yes);
    CHECK(seq.system(1).is_positive(1, ComplexMatrix::identity(2)).positive());
    auto sign = canonical_injection(seq, 1, ComplexMatrix::diagonal({1.0, -1.0}));
    CHECK(limit_positive(seq, sign).status == LimitStatus::no);
    CHECK_FALSE(seq.system(1).is_positive(1, ComplexMatrix::diagonal({1.0, -1.0})).positive());
  }
}
