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

#include "oslim/inductive_limit.hpp"
#include "oslim/uhf.hpp"
#include "support.hpp"

using namespace oslim;

namespace {

InductiveSequence doubling(std::size_t depth) {
  SequenceOptions opts;
  opts.depth = depth;
  return uhf_sequence(GammaRule({2}), depth, opts);
}

// Non-inclusion sequence on the diagonal system: every step averages the two
// diagonal entries, so distinct elements merge after one stage.
InductiveSequence averaging(std::size_t depth) {
  auto diag = testsupport::diagonal_system();
  auto avg = LinearMap::from_action(diag, diag, [](const ComplexMatrix& x) {
    const complexd t = 0.5 * (x(0, 0) + x(1, 1));
    return ComplexMatrix::diagonal({t, t});
  });
  SequenceOptions opts;
  opts.depth = depth;
  return InductiveSequence::generated([diag](std::size_t) { return diag; },
                                      [avg](std::size_t) { return avg; }, opts, false,
                                      "averaging");
}

}  // namespace

TEST_CASE("sequence construction and certification", "[indlimit]") {
  SECTION("uhf doubling materializes certified block embeddings") {
    auto seq = doubling(4);
    CHECK(seq.system(1).ambient_dim() == 2);
    CHECK(seq.system(3).ambient_dim() == 8);
    CHECK(seq.inclusion_flag());
    CHECK(seq.certificate(1).kind == StageCertKind::structural_isometry);
    CHECK(seq.certificate(1).order_mono);
  }
  SECTION("stage access beyond depth raises DepthExceeded") {
    auto seq = doubling(3);
    CHECK_THROWS_AS(seq.system(4), error);
    try {
      seq.connect(3);
      FAIL("expected DepthExceeded");
    } catch (const error& e) {
      CHECK(e.code() == errc::depth_exceeded);
    }
  }
  SECTION("explicit stages must chain") {
    auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
    auto m4 = ConcreteOperatorSystem::full_matrix_algebra(4);
    CHECK_THROWS_AS(InductiveSequence::from_stages({m2, m4},
                                                   {LinearMap::identity(m2)}, {}),
                    error);
  }
  SECTION("non-unital connecting maps are rejected") {
    auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
    auto m4 = ConcreteOperatorSystem::full_matrix_algebra(4);
    auto corner = LinearMap::from_action(m2, m4, [](const ComplexMatrix& x) {
      ComplexMatrix y(4, 4);
      y.set_block(0, 0, x);
      return y;
    });
    auto seq = InductiveSequence::from_stages({m2, m4}, {corner}, {});
    CHECK_THROWS_AS(seq.connect(1), error);
  }
  SECTION("claimed inclusions are refused when maps merge elements") {
    auto diag = testsupport::diagonal_system();
    auto avg = LinearMap::from_action(diag, diag, [](const ComplexMatrix& x) {
      const complexd t = 0.5 * (x(0, 0) + x(1, 1));
      return ComplexMatrix::diagonal({t, t});
    });
    auto seq = InductiveSequence::from_stages({diag, diag}, {avg}, {}, true);
    try {
      seq.connect(1);
      FAIL("expected NotInclusionSequence");
    } catch (const error& e) {
      CHECK(e.code() == errc::not_inclusion_sequence);
    }
  }
}

TEST_CASE("push_forward composes the connecting maps", "[indlimit]") {
  SECTION("scalar seed doubles into diag(5,5)") {
    auto seq = uhf_sequence(GammaRule({1, 2}), 2);
    auto e = canonical_injection(seq, 1, ComplexMatrix::from_rows({{5.0}}));
    auto pushed = push_forward(seq, e, 2);
    CHECK(pushed.stage == 2);
    CHECK(max_abs_diff(pushed.rep, ComplexMatrix::diagonal({5.0, 5.0})) == 0.0);
  }
  SECTION("pushing to the own stage is the identity") {
    auto seq = doubling(3);
    auto e = canonical_injection(seq, 2, ComplexMatrix::identity(4));
    auto same = push_forward(seq, e, 2);
    CHECK(same.stage == 2);
    CHECK(max_abs_diff(same.rep, e.rep) == 0.0);
  }
  SECTION("two doublings repeat the diagonal four times") {
    auto seq = doubling(3);
    auto e = canonical_injection(seq, 1, ComplexMatrix::diagonal({1.0, 2.0}));
    auto pushed = push_forward(seq, e, 3);
    CHECK(max_abs_diff(pushed.rep,
                       ComplexMatrix::diagonal({1, 2, 1, 2, 1, 2, 1, 2})) == 0.0);
  }
  SECTION("backwards and beyond-depth pushes are errors") {
    auto seq = doubling(3);
    auto e = canonical_injection(seq, 2, ComplexMatrix::identity(4));
    CHECK_THROWS_AS(push_forward(seq, e, 1), error);
    try {
      push_forward(seq, e, 4);
      FAIL("expected DepthExceeded");
    } catch (const error& err) {
      CHECK(err.code() == errc::depth_exceeded);
    }
  }
  SECTION("spectrum multiplies under the canonical embedding") {
    auto seq = doubling(4);
    Rng rng(9);
    const ComplexMatrix x = random_hermitian(rng, 2);
    const auto base = hermitian_eigenvalues(x);
    auto pushed = push_forward(seq, canonical_injection(seq, 1, x), 4);
    const auto big = hermitian_eigenvalues(pushed.rep);
    REQUIRE(big.size() == 16);
    for (std::size_t c = 0; c < 8; ++c) {
      CHECK_THAT(big[c], Catch::Matchers::WithinAbs(base[0], 1e-9));
      CHECK_THAT(big[8 + c], Catch::Matchers::WithinAbs(base[1], 1e-9));
    }
  }
}

TEST_CASE("limit equality semantics", "[indlimit]") {
  SECTION("stage-1 and stage-2 representatives of the same class") {
    auto seq = doubling(3);
    auto e1 = canonical_injection(seq, 1, ComplexMatrix::diagonal({1.0, 2.0}));
    auto e2 = canonical_injection(seq, 2, ComplexMatrix::diagonal({1.0, 2.0, 1.0, 2.0}));
    const auto v = limit_eq(seq, e1, e2);
    CHECK(v.status == LimitStatus::yes);
    CHECK(v.stage_used == 2);
  }
  SECTION("reflexivity fires at the element's own stage") {
    auto seq = doubling(3);
    auto e = canonical_injection(seq, 2, ComplexMatrix::identity(4).scaled(3.0));
    const auto v = limit_eq(seq, e, e);
    CHECK(v.status == LimitStatus::yes);
    CHECK(v.stage_used == 2);
  }
  SECTION("distinct scalars stay distinct in an inclusion sequence") {
    auto seq = uhf_sequence(GammaRule({1, 2}), 2);
    auto e0 = canonical_injection(seq, 1, ComplexMatrix::from_rows({{0.0}}));
    auto e1 = canonical_injection(seq, 1, ComplexMatrix::from_rows({{1.0}}));
    const auto v = limit_eq(seq, e0, e1);
    CHECK(v.status == LimitStatus::no);
  }
  SECTION("merging sequences produce late Yes verdicts") {
    auto seq = averaging(4);
    auto e1 = canonical_injection(seq, 1, ComplexMatrix::diagonal({1.0, 0.0}));
    auto e2 = canonical_injection(seq, 1, ComplexMatrix::diagonal({0.0, 1.0}));
    const auto v = limit_eq(seq, e1, e2);
    CHECK(v.status == LimitStatus::yes);
    CHECK(v.stage_used == 2);
  }
  SECTION("non-inclusion disagreement exhausts to Unknown") {
    auto seq = averaging(4);
    auto e1 = canonical_injection(seq, 1, ComplexMatrix::diagonal({1.0, 0.0}));
    auto e2 = canonical_injection(seq, 1, ComplexMatrix::diagonal({0.9, 0.0}));
    const auto v = limit_eq(seq, e1, e2);
    CHECK(v.status == LimitStatus::unknown);
    CHECK(v.stage_used == 4);
  }
  SECTION("level mismatch is an error") {
    auto seq = doubling(3);
    auto e1 = canonical_injection(seq, 1, ComplexMatrix::identity(2));
    auto e2 = canonical_injection(seq, 1, ComplexMatrix::identity(4));
    try {
      limit_eq(seq, e1, e2);
      FAIL("expected LevelMismatch");
    } catch (const error& e) {
      CHECK(e.code() == errc::level_mismatch);
    }
  }
}

TEST_CASE("limit positivity semantics", "[indlimit]") {
  auto seq = doubling(4);
  SECTION("the unit is exactly positive at its own stage") {
    auto e = canonical_injection(seq, 1, ComplexMatrix::identity(2));
    const auto v = limit_positive(seq, e);
    CHECK(v.status == LimitStatus::yes);
    CHECK(v.stage_used == 1);
    CHECK(v.epsilon_used == 0.0);
  }
  SECTION("a PSD matrix stays positive in the limit") {
    auto e = canonical_injection(seq, 1, ComplexMatrix::from_rows({{2, 1}, {1, 2}}));
    CHECK(limit_positive(seq, e).status == LimitStatus::yes);
  }
  SECTION("a sign matrix is certified negative in an inclusion sequence") {
    auto e = canonical_injection(seq, 1, ComplexMatrix::diagonal({1.0, -1.0}));
    const auto v = limit_positive(seq, e);
    CHECK(v.status == LimitStatus::no);
  }
  SECTION("margins inside the ladder stay Unknown") {
    auto e = canonical_injection(seq, 1, ComplexMatrix::diagonal({1.0, -1e-5}));
    CHECK(limit_positive(seq, e).status == LimitStatus::unknown);
  }
  SECTION("non-inclusion sequences can turn positive after forwarding") {
    auto avg = averaging(4);
    auto e = canonical_injection(avg, 1, ComplexMatrix::diagonal({1.0, -0.2}));
    const auto v = limit_positive(avg, e);
    CHECK(v.status == LimitStatus::yes);
    CHECK(v.stage_used == 2);
  }
  SECTION("non-Hermitian representatives are rejected") {
    auto e = canonical_injection(seq, 1, ComplexMatrix::from_rows({{0, 1}, {0, 0}}));
    CHECK_THROWS_AS(limit_positive(seq, e), error);
  }
  SECTION("verdicts survive push-forward of the representative") {
    Rng rng(21);
    for (int rep = 0; rep < 10; ++rep) {
      const ComplexMatrix x = random_hermitian(rng, 2);
      auto e = canonical_injection(seq, 1, x);
      const auto v1 = limit_positive(seq, e);
      const auto v2 = limit_positive(seq, push_forward(seq, e, 3));
      CHECK(v1.status == v2.status);
      CHECK(limit_eq(seq, e, push_forward(seq, e, 3)).status == LimitStatus::yes);
    }
  }
}

TEST_CASE("canonical injection properties", "[indlimit]") {
  auto seq = doubling(4);
  SECTION("membership is enforced") {
    auto diagseq = averaging(2);
    try {
      canonical_injection(diagseq, 1, ComplexMatrix::from_rows({{0, 1}, {1, 0}}));
      FAIL("expected NotInSystem");
    } catch (const error& e) {
      CHECK(e.code() == errc::not_in_system);
    }
  }
  SECTION("units at every stage represent the same limit element") {
    auto u1 = canonical_injection(seq, 1, ComplexMatrix::identity(2));
    for (std::size_t k = 2; k <= 4; ++k) {
      auto uk = canonical_injection(seq, k, ComplexMatrix::identity(2ull << (k - 1)));
      CHECK(limit_eq(seq, u1, uk).status == LimitStatus::yes);
    }
  }
  SECTION("injection commutes with the involution") {
    Rng rng(4);
    const ComplexMatrix x = random_gaussian_matrix(rng, 2, 2);
    auto starred = canonical_injection(seq, 1, x.adjoint());
    auto adjointed = limit_adjoint(canonical_injection(seq, 1, x));
    CHECK(limit_eq(seq, starred, adjointed).status == LimitStatus::yes);
  }
  SECTION("triangle: injection(k, x) equals injection(k+1, phi_k(x))") {
    for (std::size_t k = 1; k < 4; ++k) {
      const ConcreteOperatorSystem& s = seq.system(k);
      for (std::size_t i = 0; i < s.dim(); ++i) {
        const ComplexMatrix x = s.basis_element(i);
        auto lhs = canonical_injection(seq, k, x);
        auto rhs = canonical_injection(seq, k + 1, seq.connect(k).apply_block(x));
        REQUIRE(limit_eq(seq, lhs, rhs).status == LimitStatus::yes);
      }
    }
  }
}

TEST_CASE("limit arithmetic", "[indlimit]") {
  auto seq = uhf_sequence(GammaRule({1, 2, 2}), 3);
  SECTION("cancellation gives the zero element") {
    auto e = canonical_injection(seq, 2, ComplexMatrix::diagonal({2.0, 5.0}));
    auto zero = limit_add(seq, e, limit_scale(e, -1.0));
    auto z = canonical_injection(seq, 2, ComplexMatrix::zero(2, 2));
    CHECK(limit_eq(seq, zero, z).status == LimitStatus::yes);
  }
  SECTION("adjoint is involutive") {
    Rng rng(3);
    auto e = canonical_injection(seq, 2, random_gaussian_matrix(rng, 2, 2));
    CHECK(limit_eq(seq, limit_adjoint(limit_adjoint(e)), e).status == LimitStatus::yes);
  }
  SECTION("mixed stages align by push-forward") {
    auto e1 = canonical_injection(seq, 1, ComplexMatrix::from_rows({{2.0}}));
    auto e2 = canonical_injection(seq, 2, ComplexMatrix::diagonal({3.0, 3.0}));
    auto sum = limit_add(seq, e1, e2);
    CHECK(sum.stage == 2);
    CHECK(max_abs_diff(sum.rep, ComplexMatrix::diagonal({5.0, 5.0})) == 0.0);
  }
  SECTION("mixed levels are rejected") {
    auto e1 = canonical_injection(seq, 2, ComplexMatrix::identity(2));
    auto e2 = canonical_injection(seq, 2, ComplexMatrix::identity(4));
    CHECK_THROWS_AS(limit_add(seq, e1, e2), error);
  }
}

TEST_CASE("universal map out of the limit", "[indlimit]") {
  SECTION("constant identity sequence induces the identity") {
    auto diag = testsupport::diagonal_system();
    SequenceOptions opts;
    opts.depth = 3;
    auto seq = InductiveSequence::generated([diag](std::size_t) { return diag; },
                                            [diag](std::size_t) { return LinearMap::identity(diag); },
                                            opts, true, "constant");
    std::vector<LinearMap> psi(3, LinearMap::identity(diag));
    UniversalMap big(seq, diag, psi);
    auto e = canonical_injection(seq, 2, ComplexMatrix::diagonal({1.0, 4.0}));
    CHECK(max_abs_diff(big(e), e.rep) == 0.0);
  }
  SECTION("definition unwinds to a push-forward") {
    auto seq = doubling(2);
    auto m4 = seq.system(2);
    std::vector<LinearMap> psi = {seq.connect(1), LinearMap::identity(m4)};
    UniversalMap big(seq, m4, psi);
    Rng rng(6);
    const ComplexMatrix x = random_gaussian_matrix(rng, 2, 2);
    auto e = canonical_injection(seq, 1, x);
    CHECK(max_abs_diff(big(e), push_forward(seq, e, 2).rep) <= 1e-12);
    // Factorization: on every basis element the composite recovers psi_k.
    for (std::size_t k = 1; k <= 2; ++k) {
      const ConcreteOperatorSystem& s = seq.system(k);
      for (std::size_t i = 0; i < s.dim(); ++i) {
        const ComplexMatrix b = s.basis_element(i);
        CHECK(max_abs_diff(big(canonical_injection(seq, k, b)), psi[k - 1].apply_block(b)) ==
              0.0);
      }
    }
  }
  SECTION("normalized partial traces violate the triangle") {
    auto seq = doubling(3);
    auto m2 = seq.system(1);
    std::vector<LinearMap> psi;
    for (std::size_t k = 1; k <= 3; ++k) {
      const std::size_t env = (1ull << (k - 1));
      psi.push_back(LinearMap::from_action(seq.system(k), m2, [env](const ComplexMatrix& x) {
        ComplexMatrix out(2, 2);
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = 0; b < 2; ++b) {
            complexd acc = 0.0;
            for (std::size_t s = 0; s < env; ++s) acc += x(a * env + s, b * env + s);
            out(a, b) = acc / static_cast<double>(env);
          }
        return out;
      }));
    }
    try {
      UniversalMap big(seq, m2, psi);
      FAIL("expected IncompatibleFamily");
    } catch (const error& e) {
      CHECK(e.code() == errc::incompatible_family);
      CHECK(std::string(e.what()).find("stage 1") != std::string::npos);
    }
  }
  SECTION("universal map preserves the unit and positivity") {
    auto seq = doubling(2);
    auto m4 = seq.system(2);
    std::vector<LinearMap> psi = {seq.connect(1), LinearMap::identity(m4)};
    UniversalMap big(seq, m4, psi);
    auto u = canonical_injection(seq, 1, ComplexMatrix::identity(2));
    CHECK(max_abs_diff(big(u), m4.unit()) == 0.0);
    Rng rng(13);
    for (int rep = 0; rep < 10; ++rep) {
      auto e = canonical_injection(seq, 1, random_psd(rng, 2));
      REQUIRE(limit_positive(seq, e).status == LimitStatus::yes);
      CHECK(m4.is_positive(e.level, big(e)).positive());
    }
  }
}

TEST_CASE("induced maps between limits", "[indlimit]") {
  SECTION("identity family induces the identity") {
    auto seq = doubling(3);
    std::vector<LinearMap> pi;
    for (std::size_t k = 1; k <= 3; ++k) pi.push_back(LinearMap::identity(seq.system(k)));
    InducedMap ind(seq, seq, pi);
    auto e = canonical_injection(seq, 2, ComplexMatrix::identity(4).scaled(2.0));
    auto img = ind(e);
    CHECK(img.stage == 2);
    CHECK(max_abs_diff(img.rep, e.rep) == 0.0);
  }
  SECTION("squared multiplicities commute with the canonical stage maps") {
    auto seqS = doubling(3);
    SequenceOptions opts;
    opts.depth = 3;
    auto seqT = uhf_sequence(GammaRule({4}), 3, opts);
    std::vector<LinearMap> pi;
    for (std::size_t k = 1; k <= 3; ++k)
      pi.push_back(LinearMap::block_embedding(seqS.system(k), seqT.system(k), 1ull << k));
    InducedMap ind(seqS, seqT, pi);
    // Right square: injecting after mapping agrees with mapping after
    // injecting, stage by stage.
    for (std::size_t k = 1; k < 3; ++k) {
      const ConcreteOperatorSystem& s = seqS.system(k);
      for (std::size_t i = 0; i < std::min<std::size_t>(s.dim(), 8); ++i) {
        const ComplexMatrix x = s.basis_element(i);
        auto lhs = canonical_injection(seqT, k, pi[k - 1].apply_block(x));
        auto rhs = ind(canonical_injection(seqS, k, x));
        CHECK(limit_eq(seqT, lhs, rhs).status == LimitStatus::yes);
      }
    }
    // Unit goes to unit, positivity is preserved.
    auto u = ind(canonical_injection(seqS, 1, ComplexMatrix::identity(2)));
    CHECK(limit_eq(seqT, u, canonical_injection(seqT, 1, ComplexMatrix::identity(4)))
              .status == LimitStatus::yes);
    Rng rng(17);
    auto e = canonical_injection(seqS, 1, random_psd(rng, 2));
    CHECK(limit_positive(seqT, ind(e)).status == LimitStatus::yes);
  }
  SECTION("misaligned block conventions are rejected") {
    auto seqS = doubling(2);
    SequenceOptions opts;
    opts.depth = 2;
    auto seqT = uhf_sequence(GammaRule({4}), 2, opts);
    std::vector<LinearMap> pi;
    for (std::size_t k = 1; k <= 2; ++k) {
      const std::size_t copies = 1ull << k;
      const ComplexMatrix eye = ComplexMatrix::identity(copies);
      pi.push_back(LinearMap::from_action(seqS.system(k), seqT.system(k),
                                          [eye](const ComplexMatrix& x) { return kron(x, eye); }));
    }
    try {
      InducedMap ind(seqS, seqT, pi);
      FAIL("expected IncompatibleSquare");
    } catch (const error& e) {
      CHECK(e.code() == errc::incompatible_square);
    }
  }
}
