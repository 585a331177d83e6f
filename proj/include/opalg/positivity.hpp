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

#include <memory>
#include <optional>
#include <vector>

#include "opalg/map.hpp"

namespace opalg {

/// An affine subset of the n x n Hermitian matrices.
class AffineConstraint {
 public:
  virtual ~AffineConstraint() = default;
  virtual Eigen::Index size() const = 0;
  /// Orthogonal (Frobenius) projection of a Hermitian matrix onto the set.
  virtual CMat project(const CMat& x) const = 0;
  /// Affine defect map; zero exactly on the set.
  virtual CVec defect(const CMat& x) const = 0;
};

/// Real coordinates of a Hermitian matrix, isometric for the Frobenius norm.
RVec herm_to_real(const CMat& h);
CMat real_to_herm(const RVec& x, Eigen::Index n);

/// Constraints trace(A_i* X) = b_i on Hermitian X.
class LinearEqualities : public AffineConstraint {
 public:
  LinearEqualities(Eigen::Index n, const std::vector<CMat>& a, const std::vector<Complex>& b);
  Eigen::Index size() const override { return n_; }
  CMat project(const CMat& x) const override;
  CVec defect(const CMat& x) const override;

 private:
  Eigen::Index n_;
  RMat normals_;  // orthonormal basis of the constraint normals, real coordinates
  RVec offset_;   // normals_^T x on the set
};

/// The affine set offset + span(directions) of Hermitian matrices.
class AffineSpan : public AffineConstraint {
 public:
  AffineSpan(const CMat& offset, const std::vector<CMat>& directions);
  Eigen::Index size() const override { return n_; }
  CMat project(const CMat& x) const override;
  CVec defect(const CMat& x) const override;

 private:
  Eigen::Index n_;
  RVec offset_;
  RMat basis_;  // orthonormal, real coordinates
};

/// Choi matrices C = Σ E_ij ⊗ T̂(E_ij) of maps M_d -> M_e whose restriction to
/// the subspace S agrees with T.
class ChoiConstraint : public AffineConstraint {
 public:
  explicit ChoiConstraint(const SubspaceMap& t);
  Eigen::Index size() const override { return d_ * e_; }
  CMat project(const CMat& c) const override;
  CVec defect(const CMat& c) const override;

 private:
  CMat reshuffle(const CMat& c) const;
  CMat unshuffle(const CMat& r) const;
  Eigen::Index d_, e_;
  CMat p_;       // d^2 x k, conj of the row-major coordinates of S's basis
  CMat target_;  // k x e^2
};

struct SdpResult {
  Certificate cert;
  /// Best affine point found.
  CMat point;
  /// PSD iterate minus affine iterate at exit; approximates the separating
  /// direction when the problem is infeasible.
  CMat gap;
};

/// Searches PSD ∩ affine with Dykstra-corrected alternating projections and
/// periodic face polishing. Never REFUTED.
SdpResult sdp_solve(const AffineConstraint& affine, const Tolerance& tol = {});
Certificate sdp_feasible(const AffineConstraint& affine, const Tolerance& tol = {});

/// Choi matrix Σ E_ij ⊗ T(E_ij) of a map defined on all of M_d.
CMat choi_matrix(const SubspaceMap& t);

/// [T(x_ij)] for a row-major k x k tuple.
CMat amplify_map(const SubspaceMap& t, const std::vector<CMat>& blocks, int k);

struct PositivityCheck {
  double input_lambda_min = 0.0;
  double image_lambda_min = 0.0;
  double membership = 0.0;  // largest distance of a block to the domain
};

/// Recomputes the eigenvalues behind a positivity witness from scratch.
PositivityCheck check_positivity_witness(const SubspaceMap& t, const std::vector<CMat>& blocks, int k);

/// Relative norm change ‖T_k(X)‖/‖X‖ - 1 for a level-k tuple.
double level_norm_change(const SubspaceMap& t, const std::vector<CMat>& blocks, int k);

/// Randomized search (plus projected-gradient refinement) for a PSD element
/// of M_k(S) with non-PSD image, k = 1..levels.
std::optional<Certificate> find_positivity_witness(const SubspaceMap& t, const Context& ctx, int levels);

/// Existence of a completely positive extension of T from the operator
/// system S to M_d. Throws InvalidInput when S is not an operator system or
/// T is not *-linear.
Certificate cp_extendable(const SubspaceMap& t, const Context& ctx = {});

/// Falsification at level k: REFUTED with a norm-changing witness, else
/// CERTIFIED meaning no violation was found.
Certificate level_k_isometric(const SubspaceMap& t, int k, int trials, const Context& ctx = {});

/// The extension a + b* -> T(a) + T(b)* to span(A ∪ A*). Returns nullopt
/// when T is not *-preserving on A ∩ A*.
std::optional<SubspaceMap> selfadjoint_extension(const SubspaceMap& t, const Tolerance& tol = {});

/// Paulsen operator system {[[λ, a], [b*, μ]]} of the domain and the induced map.
SubspaceMap paulsen_map(const SubspaceMap& t, const Tolerance& tol = {});

/// Inverse of an injective map, defined on its range.
SubspaceMap inverse_map(const SubspaceMap& t, const Tolerance& tol = {});

/// Complete isometry verdict. The unital path certifies complete positivity
/// of the selfadjoint extension and its inverse; otherwise the Paulsen
/// system is used. Refutations carry kernel, level-norm or positivity
/// witnesses.
Certificate complete_isometry(const SubspaceMap& t, const Context& ctx = {});

/// Complete contraction verdict via the Paulsen system.
Certificate complete_contraction(const SubspaceMap& t, const Context& ctx = {});

/// Re-verifies a REFUTED certificate from scratch against T; returns the
/// violation size (0 when the witness does not check out).
double witness_violation(const SubspaceMap& t, const Certificate& c, const Tolerance& tol = {});

/// Resolves a certificate/witness clash: the refutation wins when its
/// witness re-verifies at cert_tol / 2, otherwise StructureFailure.
Certificate resolve_tie(const SubspaceMap& t, const Certificate& certified, const Certificate& refuted,
                        const Tolerance& tol = {});

}  // namespace opalg
