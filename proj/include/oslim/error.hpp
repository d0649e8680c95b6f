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

#include <stdexcept>
#include <string>

namespace oslim {

/// Failure kinds raised by the library. Every throwing code path uses
/// oslim::error carrying one of these codes, so callers can branch on the
/// kind without parsing messages.
enum class errc {
  invalid_argument,
  not_hermitian,
  no_convergence,
  dimension_mismatch,
  missing_unit,
  dependent_basis,
  not_adjoint_closed,
  not_in_system,
  not_in_span,
  domain_not_full_algebra,
  not_injective,
  not_positive_factor,
  necessary_condition_failed,
  depth_exceeded,
  level_mismatch,
  incompatible_family,
  incompatible_square,
  not_inclusion_sequence,
  size_cap_exceeded,
  empty_ladder,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::not_hermitian: return "NotHermitian";
    case errc::no_convergence: return "NoConvergence";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::missing_unit: return "MissingUnit";
    case errc::dependent_basis: return "DependentBasis";
    case errc::not_adjoint_closed: return "NotAdjointClosed";
    case errc::not_in_system: return "NotInSystem";
    case errc::not_in_span: return "NotInSpan";
    case errc::domain_not_full_algebra: return "DomainNotFullAlgebra";
    case errc::not_injective: return "NotInjective";
    case errc::not_positive_factor: return "NotPositiveFactor";
    case errc::necessary_condition_failed: return "NecessaryConditionFailed";
    case errc::depth_exceeded: return "DepthExceeded";
    case errc::level_mismatch: return "LevelMismatch";
    case errc::incompatible_family: return "IncompatibleFamily";
    case errc::incompatible_square: return "IncompatibleSquare";
    case errc::not_inclusion_sequence: return "NotInclusionSequence";
    case errc::size_cap_exceeded: return "SizeCapExceeded";
    case errc::empty_ladder: return "EmptyLadder";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace oslim
