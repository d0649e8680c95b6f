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

#include "oslim/linear_map.hpp"
#include "support.hpp"

using namespace oslim;

namespace {

LinearMap transpose_map() {
  auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
  return LinearMap::from_action(m2, m2, [](const ComplexMatrix& x) { return x.transpose(); });
}

}  // namespace

TEST_CASE("apply extends linearly over blocks", "[ucp]") {
  SECTION("identity map") {
    auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
    auto id = LinearMap::identity(m2);
    Rng rng(1);
    const ComplexMatrix u = random_gaussian_matrix(rng, 4, 4);
    CHECK(max_abs_diff(id.apply(2, u), u) == 0.0);
  }
  SECTION("doubling embedding sends [3] to diag(3,3)") {
    auto m1 = ConcreteOperatorSystem::full_matrix_algebra(1);
    auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
    auto f = LinearMap::block_embedding(m1, m2, 2);
    const ComplexMatrix x = ComplexMatrix::from_rows({{3.0}});
    CHECK(max_abs_diff(f.apply(1, x), ComplexMatrix::diagonal({3.0, 3.0})) == 0.0);
  }
  SECTION("transpose swaps matrix units") {
    auto t = transpose_map();
    const ComplexMatrix e01 = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
    const ComplexMatrix e10 = ComplexMatrix::from_rows({{0, 0}, {1, 0}});
    CHECK(max_abs_diff(t.apply(1, e01), e10) == 0.0);
  }
  SECTION("non-member input raises NotInSystem") {
    auto diag = testsupport::diagonal_system();
    auto id = LinearMap::identity(diag);
    try {
      id.apply(1, ComplexMatrix::from_rows({{1, 1}, {1, 1}}));
      FAIL("expected NotInSystem");
    } catch (const error& e) {
      CHECK(e.code() == errc::not_in_system);
    }
  }
}

TEST_CASE("map construction validates images", "[ucp]") {
  auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
  auto diag = testsupport::diagonal_system();
  SECTION("image count must match the basis") {
    CHECK_THROWS_AS(LinearMap::from_images(diag, diag, {ComplexMatrix::identity(2)}), error);
  }
  SECTION("images must stay in the codomain span") {
    try {
      LinearMap::from_images(diag, diag,
                             {ComplexMatrix::identity(2), ComplexMatrix::from_rows({{0, 1}, {1, 0}})});
      FAIL("expected NotInSystem");
    } catch (const error& e) {
      CHECK(e.code() == errc::not_in_system);
    }
  }
  SECTION("explicit images for the compression onto diagonals") {
    // I, X, Y, Z -> I, 0, 0, Z.
    auto f = LinearMap::from_images(
        m2, diag,
        {ComplexMatrix::identity(2), ComplexMatrix::zero(2, 2), ComplexMatrix::zero(2, 2),
         ComplexMatrix::diagonal({1.0, -1.0})});
    const ComplexMatrix u = ComplexMatrix::from_rows({{1, 5}, {5, 2}});
    CHECK(max_abs_diff(f.apply(1, u), ComplexMatrix::diagonal({1.0, 2.0})) <= 1e-12);
  }
}

TEST_CASE("choi matrices of the basic maps", "[ucp]") {
  auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
  SECTION("identity: rank-one with eigenvalues {0,0,0,2}") {
    const ComplexMatrix c = choi_matrix(LinearMap::identity(m2));
    // Algebraic oracle: C^2 = 2C and tr C = 2 force the spectrum {2,0,0,0}.
    CHECK(max_abs_diff(c * c, c.scaled(2.0)) <= 1e-12);
    CHECK_THAT(c.trace().real(), Catch::Matchers::WithinAbs(2.0, 1e-12));
    const auto w = hermitian_eigenvalues(c);
    CHECK_THAT(w[0], Catch::Matchers::WithinAbs(0.0, 1e-9));
    CHECK_THAT(w[1], Catch::Matchers::WithinAbs(0.0, 1e-9));
    CHECK_THAT(w[2], Catch::Matchers::WithinAbs(0.0, 1e-9));
    CHECK_THAT(w[3], Catch::Matchers::WithinAbs(2.0, 1e-9));
  }
  SECTION("transpose: the swap matrix with eigenvalues {-1,1,1,1}") {
    const ComplexMatrix c = choi_matrix(transpose_map());
    // Oracle: C is an involution with trace 2, so the spectrum is
    // {-1, 1, 1, 1}.
    CHECK(max_abs_diff(c * c, ComplexMatrix::identity(4)) <= 1e-12);
    CHECK_THAT(c.trace().real(), Catch::Matchers::WithinAbs(2.0, 1e-12));
    const auto w = hermitian_eigenvalues(c);
    CHECK_THAT(w[0], Catch::Matchers::WithinAbs(-1.0, 1e-9));
    CHECK_THAT(w[1], Catch::Matchers::WithinAbs(1.0, 1e-9));
    CHECK_THAT(w[3], Catch::Matchers::WithinAbs(1.0, 1e-9));
  }
  SECTION("canonical embedding has an exactly PSD choi matrix") {
    auto m4 = ConcreteOperatorSystem::full_matrix_algebra(4);
    const ComplexMatrix c = choi_matrix(LinearMap::block_embedding(m2, m4, 2));
    CHECK(is_psd(c));
  }
  SECTION("choi needs a full-algebra domain") {
    auto diag = testsupport::diagonal_system();
    try {
      choi_matrix(LinearMap::identity(diag));
      FAIL("expected DomainNotFullAlgebra");
    } catch (const error& e) {
      CHECK(e.code() == errc::domain_not_full_algebra);
    }
  }
}

TEST_CASE("is_ucp classifies the canonical examples", "[ucp]") {
  auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
  auto m4 = ConcreteOperatorSystem::full_matrix_algebra(4);
  SECTION("identity is UCP") {
    const auto v = is_ucp(LinearMap::identity(m2));
    CHECK(v.status == CpStatus::ucp);
    CHECK(v.exact);
    CHECK(v.unital);
  }
  SECTION("transpose is NotCP with a self-verifying witness") {
    auto t = transpose_map();
    const auto v = is_ucp(t);
    REQUIRE(v.status == CpStatus::not_cp);
    REQUIRE(v.witness.has_value());
    const auto& w = *v.witness;
    CHECK(is_psd(w.element));
    const ComplexMatrix img = t.apply(w.level, w.element);
    CHECK_THAT(min_eigenvalue(img), Catch::Matchers::WithinAbs(w.image_min_eig, 1e-9));
    CHECK(w.image_min_eig < -1e-9);
  }
  SECTION("corner embedding is CP but not unital") {
    auto corner = LinearMap::from_action(m2, m4, [](const ComplexMatrix& x) {
      ComplexMatrix y(4, 4);
      y.set_block(0, 0, x);
      return y;
    });
    const auto v = is_ucp(corner);
    CHECK(v.status == CpStatus::cp_not_unital);
    CHECK_FALSE(v.unital);
  }
  SECTION("unitary conjugation is UCP") {
    Rng rng(17);
    const ComplexMatrix u = random_unitary(rng, 2);
    auto f = LinearMap::from_action(m2, m2,
                                    [u](const ComplexMatrix& x) { return congruence(u, x); });
    CHECK(is_ucp(f).status == CpStatus::ucp);
  }
  SECTION("proper subsystem domains are sampled") {
    auto diag = testsupport::diagonal_system();
    const auto v = is_ucp(LinearMap::identity(diag), 3, 40, 99);
    CHECK(v.status == CpStatus::unknown_up_to_level);
    CHECK_FALSE(v.exact);
    CHECK(v.checked_level == 3);
    CHECK(v.unital);
  }
}

TEST_CASE("complete order monomorphism checks", "[ucp]") {
  auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
  SECTION("canonical embedding passes up to level 3") {
    auto m4 = ConcreteOperatorSystem::full_matrix_algebra(4);
    auto f = LinearMap::block_embedding(m2, m4, 2);
    const auto v = is_complete_order_mono(f, 3, 30, 5);
    CHECK(v.status == CpStatus::unknown_up_to_level);
    CHECK(v.checked_level == 3);
  }
  SECTION("compression onto diagonals is rejected as non-injective") {
    auto diag = testsupport::diagonal_system();
    auto f = LinearMap::from_images(
        m2, diag,
        {ComplexMatrix::identity(2), ComplexMatrix::zero(2, 2), ComplexMatrix::zero(2, 2),
         ComplexMatrix::diagonal({1.0, -1.0})});
    try {
      is_complete_order_mono(f);
      FAIL("expected NotInjective");
    } catch (const error& e) {
      CHECK(e.code() == errc::not_injective);
    }
  }
  SECTION("injective map failing the reflection direction") {
    // diag(a, b) -> diag(a, (a+b)/2, (a+b)/2): CP, unital, injective, but
    // the image can be positive while the input is not.
    auto d2 = testsupport::diagonal_system();
    auto d3 = testsupport::diagonal3_system();
    auto f = LinearMap::from_action(d2, d3, [](const ComplexMatrix& x) {
      const complexd a = x(0, 0), b = x(1, 1);
      return ComplexMatrix::diagonal({a, 0.5 * (a + b), 0.5 * (a + b)});
    });
    REQUIRE(is_ucp(f, 3, 60, 3).status == CpStatus::unknown_up_to_level);
    const auto v = is_complete_order_mono(f, 3, 100, 11);
    REQUIRE(v.status == CpStatus::not_cp);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->direction == "reflection");
    // Witness self-verifies: image positive, input not.
    CHECK(v.witness->element_min_eig < -1e-9);
    CHECK(v.witness->image_min_eig >= -1e-9);
    const ComplexMatrix img = f.apply(v.witness->level, v.witness->element);
    CHECK(min_eigenvalue(img.hermitized()) >= -1e-9);
  }
  SECTION("injective map clean at level 1 but failing at level 2") {
    // x -> tr(x) I - x swaps the two eigenvalues, so level 1 can never
    // witness a failure; level 2 does.
    auto f = LinearMap::from_action(m2, m2, [](const ComplexMatrix& x) {
      return ComplexMatrix::identity(2).scaled(x.trace()) - x;
    });
    CHECK(f.unital());
    // Deterministic forward evidence: the maximally entangled input maps to
    // I - omega, whose smallest eigenvalue is exactly -1.
    const ComplexMatrix img = f.apply(2, max_entangled(2));
    CHECK_THAT(min_eigenvalue(img), Catch::Matchers::WithinAbs(-1.0, 1e-12));
    const auto v = is_complete_order_mono(f, 2, 100, 21);
    REQUIRE(v.status == CpStatus::not_cp);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->level == 2);
    // Witness self-verifies in whichever direction was reported.
    const double in_eig = min_eigenvalue(v.witness->element.hermitized());
    const double out_eig = min_eigenvalue(f.apply(2, v.witness->element).hermitized());
    if (v.witness->direction == "forward") {
      CHECK(in_eig >= -1e-9);
      CHECK(out_eig < -1e-9);
    } else {
      CHECK(v.witness->direction == "reflection");
      CHECK(in_eig < -1e-9);
      CHECK(out_eig >= -1e-9);
    }
  }
}

TEST_CASE("composition along chains", "[ucp]") {
  auto m2 = ConcreteOperatorSystem::full_matrix_algebra(2);
  auto m4 = ConcreteOperatorSystem::full_matrix_algebra(4);
  auto m8 = ConcreteOperatorSystem::full_matrix_algebra(8);
  std::vector<LinearMap> chain = {LinearMap::block_embedding(m2, m4, 2),
                                  LinearMap::block_embedding(m4, m8, 2)};
  SECTION("two doubling steps give four block copies") {
    auto f = path_compose(chain, 1, 3);
    Rng rng(2);
    const ComplexMatrix x = random_gaussian_matrix(rng, 2, 2);
    CHECK(max_abs_diff(f.apply(1, x), kron(ComplexMatrix::identity(4), x)) == 0.0);
  }
  SECTION("single step equals the stage map; empty path is the identity") {
    Rng rng(3);
    const ComplexMatrix x = random_gaussian_matrix(rng, 2, 2);
    CHECK(max_abs_diff(path_compose(chain, 1, 2).apply(1, x), chain[0].apply(1, x)) == 0.0);
    CHECK(max_abs_diff(path_compose(chain, 1, 1).apply(1, x), x) == 0.0);
  }
  SECTION("compose is associative on samples") {
    auto t = transpose_map();
    auto u = LinearMap::block_embedding(m2, m4, 2);
    auto w = LinearMap::block_embedding(m4, m8, 2);
    auto lhs = compose(compose(t, u), w);
    auto rhs = compose(t, compose(u, w));
    Rng rng(4);
    const ComplexMatrix x = random_gaussian_matrix(rng, 2, 2);
    CHECK(max_abs_diff(lhs.apply(1, x), rhs.apply(1, x)) <= 1e-12);
  }
  SECTION("transpose composed with itself is the identity") {
    auto t = transpose_map();
    auto tt = compose(t, t);
    Rng rng(5);
    const ComplexMatrix x = random_gaussian_matrix(rng, 2, 2);
    CHECK(max_abs_diff(tt.apply(1, x), x) <= 1e-12);
  }
  SECTION("composites of UCP chain maps stay UCP") {
    auto m6 = ConcreteOperatorSystem::full_matrix_algebra(6);
    auto m12 = ConcreteOperatorSystem::full_matrix_algebra(12);
    std::vector<LinearMap> mm = {LinearMap::block_embedding(m2, m6, 3),
                                 LinearMap::block_embedding(m6, m12, 2)};
    for (const auto& f : mm) REQUIRE(is_ucp(f).status == CpStatus::ucp);
    CHECK(is_ucp(path_compose(mm, 1, 3)).status == CpStatus::ucp);
  }
  SECTION("mismatched chain raises") {
    CHECK_THROWS_AS(compose(chain[1], chain[0]), error);
  }
}

TEST_CASE("positive element sampler respects membership and positivity", "[ucp]") {
  Rng rng(31);
  for (auto sys : {testsupport::pauli_system(), testsupport::diagonal_system(),
                   ConcreteOperatorSystem::full_matrix_algebra(3)}) {
    for (std::size_t level : {1u, 2u}) {
      for (int rep = 0; rep < 10; ++rep) {
        const ComplexMatrix u = random_positive_element(sys, level, rng);
        CHECK(sys.contains(level, u, Tolerance(1e-7)).contained);
        CHECK(min_eigenvalue(u.hermitized()) >= -1e-9);
      }
    }
  }
}
