// Copyright 2026 The opalg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opalg/map.hpp"
#include "opalg/positivity.hpp"

namespace opalg {

struct TypeFlags {
  bool shilov = false;
  bool left_type1 = false;
  bool right_type1 = false;
};

/// T(A) = U diag(A, S(A)) V.
struct BlockForm {
  CMat u;
  CMat v;
  SubspaceMap s;
  double residual = 0.0;
};

struct IsometryAnalysis {
  Certificate verdict;
  /// Right and left support projections of the triple ideal N.
  CMat p;
  CMat q;
  /// T(1)(1 - p).
  CMat u;
  /// a -> u* T(a) (1 - p), the multiplicative part.
  SubspaceMap theta;
  TypeFlags flags;
  std::optional<BlockForm> block_form;
  /// Wedderburn blocks of the corner algebra forming N.
  std::vector<int> ideal_blocks;
  int ideal_dim = 0;

  double partial_isometry_residual = 0.0;  // ‖u u* u - u‖
  double support_residual = 0.0;           // max ‖u* u θ(a) - θ(a)‖
  double factor_residual = 0.0;            // max ‖T(a)(1 - p) - u θ(a)‖
  double multiplicative_residual = 0.0;    // max ‖θ(ab) - θ(a) θ(b)‖
  /// max ‖T(ab)(1 - p) - T(a) T(1)* T(b)(1 - p)‖ over basis pairs.
  double star_identity_residual = 0.0;
};

/// Decomposes a complete isometry T on a unital algebra. The codomain
/// algebra used for the type-1 flags defaults to the unital algebra
/// generated by the range. Non-certified inputs return with only the
/// verdict filled in. Throws StructureFailure when a decomposition
/// invariant fails.
IsometryAnalysis analyze(const SubspaceMap& t, const Context& ctx = {},
                         const std::optional<Subspace>& codomain_algebra = std::nullopt);

/// Unitaries U, V and a complete contraction S with T(A) = U diag(A, S(A)) V
/// on T_n.
BlockForm block_form_T_n(const SubspaceMap& t, const Context& ctx = {});
BlockForm block_form_from(const SubspaceMap& t, const IsometryAnalysis& analysis, const Tolerance& tol = {});

struct Type1Report {
  bool applicable = false;
  std::vector<std::string> notes;
  /// max ‖T(1) T(ab) - T(a) T(b)‖, when T(1) commutes with T(A).
  std::optional<double> commuting_identity;
  /// max ‖T(a) - u u* T(a)‖ with u = T(1).
  std::optional<double> factor_residual;
  /// ‖u u* - 1‖ when 1 lies in the range.
  std::optional<double> coisometry_residual;
  /// max ‖T(ab) - T(a) T(b)‖ for unital T.
  std::optional<double> homomorphism_residual;
  /// Estimated best K in ‖ζ‖ <= K sup{‖T(a) ζ‖ : ‖a‖ <= 1}.
  std::optional<double> bound_k;
  bool t1_invertible = false;
};

Type1Report type1_consequences(const SubspaceMap& t, const IsometryAnalysis& analysis, const Context& ctx = {});

struct SurjectiveDecomposition {
  CMat u;
  SubspaceMap theta;
  double unitary_residual = 0.0;
  double multiplicative_residual = 0.0;
};

/// T = u θ for a complete isometry of A onto B, with u = T(1) a unitary in
/// the diagonal of B. Throws RangeNotOnto when T(A) is not B.
SurjectiveDecomposition surjective_decompose(const SubspaceMap& t, const Subspace& b, const Tolerance& tol = {});

/// max ‖f(ab) - f(a) f(b)‖ over domain basis pairs.
double multiplicativity_defect(const SubspaceMap& f);

}  // namespace opalg
