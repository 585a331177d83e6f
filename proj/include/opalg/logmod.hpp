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

struct Factorization {
  /// b = a* a with a and a^{-1} in A.
  CMat a;
  double residual = 0.0;             // ‖a* a - b‖ / ‖b‖
  double membership = 0.0;           // distance of a to A, relative
  double inverse_membership = 0.0;   // distance of a^{-1} to A, relative
};

/// Recognizes A as U N U* with N block upper triangular, using the
/// Wedderburn blocks of A ∩ A* and the order in which A links them.
std::optional<NestPattern> find_nest(const Subspace& a, const Tolerance& tol = {});

/// Factors a strictly positive b as a* a inside a nest-type algebra, that is
/// one carrying a NestPattern record or recognized by detect_nest or
/// find_nest. Throws NotStrictlyPositive, or UnsupportedAlgebra
/// when no nest pattern is known.
Factorization factorize(const Subspace& a, const CMat& b, const Tolerance& tol = {});

struct FactorForms {
  /// b = polar_u |a| with polar_u the unitary of b's polar decomposition.
  CMat polar_u;
  /// b = u a with a invertible in A.
  CMat u;
  CMat a;
  double modulus_residual = 0.0;  // ‖b - polar_u |a|‖ / ‖b‖
  double product_residual = 0.0;  // ‖b - u a‖ / ‖b‖
};

/// Both unitary-times-A forms of an invertible b: b = u |a| with u the polar
/// unitary, and b = u a with a in A^{-1}.
FactorForms factor_forms(const Subspace& a, const CMat& b, const Tolerance& tol = {});

enum class Side { Left, Right };

std::string to_string(Side s);

/// Decides whether X lies in the cone {Σ a_k* a_k} (left) or {Σ a_k a_k*}
/// (right) over a in A. CERTIFIED carries the Gram matrix C over A's basis;
/// REFUTED carries a Hermitian Y with tr(Y X) < 0 that is nonnegative on the
/// cone. Throws InvalidInput for non-PSD X.
Certificate cone_membership(const Subspace& a, const CMat& x, Side side, const Tolerance& tol = {});

/// Re-verifies a cone certificate against X: returns the worst residual (0
/// when it holds; for REFUTED, the violation of nonnegativity on the cone or
/// of tr(Y X) < 0).
double verify_cone_certificate(const Subspace& a, const CMat& x, Side side, const Certificate& c,
                               const Tolerance& tol = {});

struct LadderReport {
  Certificate dirichlet;
  Certificate factorization;
  Certificate logmodular;
  Certificate logrigged;
  Certificate conv_approx_left;
  Certificate conv_approx_right;
  int factor_samples = 0;
  double worst_factor_residual = 0.0;
  int cone_samples = 0;
  /// Set when the boundary-ideal cross-check ran.
  std::optional<bool> envelope_full;
  std::vector<std::string> notes;
};

/// Places A ⊆ B on the factorization / logmodular / logrigged / convex
/// approximation ladder. Rungs without a decision procedure are inferred
/// from their neighbours or left INCONCLUSIVE. Throws StructureFailure when
/// the rungs contradict the implication order.
LadderReport classify_ladder(const Subspace& a, const Subspace& b, const Context& ctx = {});

struct SimilarityReport {
  /// x A x^{-1} = u A u*.
  CMat u;
  double subspace_distance = 0.0;
  int factor_samples = 0;
  double worst_factor_residual = 0.0;
  bool envelope_full = false;
  std::vector<int> envelope_dims;
};

/// Rewrites x A x^{-1} as a unitary conjugate via x = u a, a in A^{-1}, and
/// checks factorization and the envelope of the conjugated algebra.
SimilarityReport similarity_transport(const Subspace& a, const CMat& x, const Context& ctx = {});

}  // namespace opalg
