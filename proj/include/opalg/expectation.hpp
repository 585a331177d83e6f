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
#include <utility>
#include <vector>

#include "opalg/logmod.hpp"
#include "opalg/map.hpp"
#include "opalg/structure.hpp"

namespace opalg {

/// Faithful tracial state τ(x) = Σ_k w_k tr(p_k x) on a *-algebra M, with p_k
/// the central projections of M's Wedderburn blocks.
struct TraceState {
  std::vector<double> block_weights;
  /// Σ_k w_k p_k, so that τ(x) = tr(density x).
  CMat density;

  Complex operator()(const CMat& x) const;

  /// Weights from the block masses τ(p_k), which must be positive; they are
  /// rescaled to sum to 1.
  static TraceState from_block_masses(const BlockStructure& m, const std::vector<double>& masses);
  /// tr / d.
  static TraceState normalized_trace(const BlockStructure& m);
};

/// Largest of |τ(1) - 1| and |τ(xy) - τ(yx)| over random unit pairs in M.
double trace_state_residual(const TraceState& tau, const Subspace& m, const Context& ctx = {});

struct ExpectationResult {
  /// Δ(A) = A ∩ A*.
  Subspace diagonal;
  /// Φ : M -> Δ(A).
  SubspaceMap phi;
  /// Over basis pairs of A; REFUTED carries the offending pair.
  Certificate multiplicative_on_a;
  double idempotence_residual = 0.0;
  double unital_residual = 0.0;
  double bimodule_residual = 0.0;
  double trace_preservation_residual = 0.0;
  /// max |τ(d* (x - Φ(x)))| over basis elements.
  double orthogonality_residual = 0.0;
  /// Most negative eigenvalue of Φ(x* x) over random x, clipped at 0.
  double positivity_residual = 0.0;
  /// Condition number of the τ-Gram matrix of the Δ(A) basis.
  double gram_condition = 1.0;
};

/// The τ-preserving conditional expectation of M onto Δ(A), computed as the
/// τ-orthogonal projection. Throws InvalidInput unless A is a unital
/// subspace of M, and StructureFailure if an invariant fails to verify.
ExpectationResult cond_exp(const Subspace& m, const TraceState& tau, const Subspace& a, const Context& ctx = {});

/// Residuals of the defining properties of a candidate expectation onto D.
/// Failed properties are named in `failures`: "unital", "range",
/// "bimodule", "trace_preserving".
struct CandidateCheck {
  double unital = 0.0;
  double range = 0.0;
  double bimodule = 0.0;
  double trace_preservation = 0.0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

CandidateCheck check_expectation_candidate(const SubspaceMap& phi, const Subspace& diagonal, const TraceState& tau,
                                           const Tolerance& tol = {});

enum class UniquenessVerdict { Equal, Different, PreconditionFailed };

std::string to_string(UniquenessVerdict v);

struct UniquenessReport {
  UniquenessVerdict verdict = UniquenessVerdict::PreconditionFailed;
  CandidateCheck phi;
  CandidateCheck psi;
  /// max over the domain basis of τ(|Φ(a) - Ψ(a)|²).
  double distance = 0.0;
};

/// Compares two candidate expectations on the same domain. EQUAL requires
/// both to pass every precondition and distance ≤ cert_tol².
UniquenessReport uniqueness_check(const SubspaceMap& phi, const SubspaceMap& psi, const Subspace& diagonal,
                                  const TraceState& tau, const Tolerance& tol = {});

/// x -> mean_i u_i x u_i* on the given domain.
SubspaceMap group_average(const Subspace& domain, Eigen::Index codomain_dim, const std::vector<CMat>& unitaries);

/// The n diagonal unitaries diag(ω^{jk}), ω = exp(2πi/n); averaging over
/// them is the diagonal compression.
std::vector<CMat> diagonal_phase_group(Eigen::Index n);

struct TracialReport {
  ExpectationResult expectation;
  /// Φ multiplicative and τ-preserving on A.
  Certificate tracial;
  /// span(A + A*) = M.
  Certificate dense;
  Eigen::Index span_dim = 0;
  Eigen::Index m_dim = 0;
  Certificate subdiagonal;
  /// For subdiagonal A: the C*-envelope of A is M.
  std::optional<Certificate> envelope_is_m;
  std::vector<int> envelope_dims;
  /// For subdiagonal A: sampled factorization b = a* a of positive b in M.
  std::optional<Certificate> factorization;
  int factor_samples = 0;
  double worst_factor_residual = 0.0;
  std::vector<std::string> notes;
};

/// Tracial / finite maximal subdiagonal classification of A ⊆ M, with the
/// envelope and factorization cross-checks when A is subdiagonal.
TracialReport classify_tracial(const Subspace& m, const TraceState& tau, const Subspace& a, const Context& ctx = {});

/// Factors a positive invertible b in M as a* a with a in A. Uses the nest
/// pattern of A when one is known, otherwise factors block by block over the
/// Wedderburn blocks of M. Throws UnsupportedAlgebra when neither applies.
Factorization factorize_in(const Subspace& m, const Subspace& a, const CMat& b, const Context& ctx = {});

struct ProjectionReport {
  Certificate verdict;
  double unital_residual = 0.0;
  double idempotence_residual = 0.0;
  double range_residual = 0.0;
  Certificate contraction;
  double bimodule_residual = 0.0;
  std::vector<std::string> failures;
  /// A completely contractive unital projection that is not a bimodule map.
  bool alarm = false;
};

/// For a unital idempotent complete contraction P of A onto B, checks
/// P(b1 a b2) = b1 P(a) b2 over basis triples. INCONCLUSIVE when a
/// precondition fails; REFUTED (with `alarm` set) on a bimodule violation.
ProjectionReport ccp_projection_is_expectation(const SubspaceMap& p, const Subspace& b, const Context& ctx = {});

struct DensityReport {
  /// span(A + A*) = M.
  Certificate dense;
  Eigen::Index span_dim = 0;
  Eigen::Index m_dim = 0;
  /// Per Wedderburn block of M: Δ(A) compresses to scalars there.
  std::vector<bool> central_by_block;
  bool diagonal_central = false;
  Certificate logrigged;
  bool hypotheses_met = false;
  std::vector<std::string> notes;
};

/// Finite-dimensional L¹ density: A + A* is dense iff it spans M. Also
/// records the centrality of Δ(A) and the logrigged rung of A in M.
DensityReport l1_density_check(const Subspace& m, const Subspace& a, const Context& ctx = {});

struct DensityScanRow {
  /// Strictly off-diagonal matrix units (i, j) generating A with the identity.
  std::vector<std::pair<int, int>> units;
  Eigen::Index dim = 0;
  bool tracial = false;
  bool dense = false;
};

/// Tabulates tracial and density verdicts for random subalgebras of M_d
/// generated by matrix units, under tr/d.
std::vector<DensityScanRow> density_scan(Eigen::Index d, int samples, const Context& ctx = {});

}  // namespace opalg
