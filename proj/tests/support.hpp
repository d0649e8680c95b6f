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

#include <algorithm>
#include <cmath>
#include <vector>

#include "oslim/linalg.hpp"
#include "oslim/operator_system.hpp"

namespace testsupport {

using oslim::complexd;
using oslim::ComplexMatrix;

// Independent eigenvalue oracle for 2x2 Hermitian matrices: the roots of
// the characteristic polynomial via the quadratic formula.
inline std::vector<double> eig2_oracle(const ComplexMatrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double b2 = std::norm(h(0, 1));
  const double mean = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b2);
  return {mean - disc, mean + disc};
}

// {I, X, Y-flavored, Z}: a Hermitian basis of M_2 given explicitly.
inline oslim::ConcreteOperatorSystem pauli_system() {
  using M = ComplexMatrix;
  std::vector<M> basis = {
      M::identity(2),
      M::from_rows({{0, 1}, {1, 0}}),
      M::from_rows({{0, complexd(0, 1)}, {complexd(0, -1), 0}}),
      M::from_rows({{1, 0}, {0, -1}}),
  };
  return oslim::ConcreteOperatorSystem::from_basis(2, std::move(basis), "pauli");
}

// span{I_2, E_00 - E_11}: the two-dimensional diagonal system.
inline oslim::ConcreteOperatorSystem diagonal_system() {
  using M = ComplexMatrix;
  std::vector<M> basis = {M::identity(2), M::from_rows({{1, 0}, {0, -1}})};
  return oslim::ConcreteOperatorSystem::from_basis(2, std::move(basis), "diag2");
}

// span{I_3, diag(1,-1,0), diag(0,1,-1)}: diagonal matrices in M_3.
inline oslim::ConcreteOperatorSystem diagonal3_system() {
  using M = ComplexMatrix;
  std::vector<M> basis = {
      M::identity(3),
      M::diagonal({1.0, -1.0, 0.0}),
      M::diagonal({0.0, 1.0, -1.0}),
  };
  return oslim::ConcreteOperatorSystem::from_basis(3, std::move(basis), "diag3");
}

inline bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

}  // namespace testsupport
