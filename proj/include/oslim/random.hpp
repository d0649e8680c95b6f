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

#include <cmath>
#include <cstdint>
#include <random>

#include "oslim/linalg.hpp"

namespace oslim {

/// Deterministic random source. The raw engine is std::mt19937_64 (whose
/// output sequence is fixed by the standard); uniform and Gaussian variates
/// are derived here by hand instead of std::*_distribution so that results
/// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; one spare value is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  complexd gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return complexd(re, im) * 0.7071067811865475244;
  }

  /// Uniform index in [0, n).
  std::size_t pick(std::size_t n) {
    if (n == 0) fail(errc::invalid_argument, "pick from empty range");
    return std::size_t(engine_() % n);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline ComplexMatrix random_gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.gaussian_complex();
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  return random_gaussian_matrix(rng, n, n).hermitized();
}

/// G G^* for Gaussian G: PSD with probability one.
inline ComplexMatrix random_psd(Rng& rng, std::size_t n) {
  const ComplexMatrix g = random_gaussian_matrix(rng, n, n);
  return g * g.adjoint();
}

/// Unitary built as a product of n Householder reflections applied to a
/// random diagonal phase matrix.
inline ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 6.283185307179586476925286766559 * rng.uniform();
    u(i, i) = complexd(std::cos(a), std::sin(a));
  }
  for (std::size_t rep = 0; rep < n; ++rep) {
    ComplexMatrix v(n, 1);
    double nrm2 = 0.0;
    while (nrm2 < 1e-12) {
      for (std::size_t i = 0; i < n; ++i) v(i, 0) = rng.gaussian_complex();
      nrm2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) nrm2 += std::norm(v(i, 0));
    }
    // u <- (I - 2 v v^* / |v|^2) u
    const ComplexMatrix vu = v.adjoint() * u;  // 1 x n
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u(i, j) -= 2.0 / nrm2 * v(i, 0) * vu(0, j);
  }
  return u;
}

}  // namespace oslim
