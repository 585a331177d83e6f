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

#include <vector>

#include "opalg/map.hpp"
#include "opalg/positivity.hpp"
#include "opalg/structure.hpp"

namespace opalg {

struct SubsetRecord {
  std::vector<int> blocks;
  Certificate cert;
  /// True when the verdict was inferred from a refuted subset.
  bool pruned = false;
};

struct EnvelopeResult {
  Subspace generated_algebra;
  BlockStructure structure;
  /// Blocks of the Shilov boundary ideal.
  std::vector<int> shilov_blocks;
  /// The remaining blocks; the envelope is ⊕ M_{n_k} over these.
  std::vector<int> envelope_blocks;
  std::vector<int> envelope_dims;
  /// Completely isometric map of the input into ⊕ M_{n_k}.
  SubspaceMap envelope_iso;
  std::vector<SubsetRecord> log;
  bool greedy = false;
  /// Set when a non-unital triple system was embedded in the 2x2 corner
  /// system; envelope_iso then sends x to the image of [[0, x], [0, 0]].
  bool via_corner = false;
  /// The envelope contains a unitary: always for unital inputs; for corner
  /// systems, when both corner projections have equal rank in every kept
  /// block.
  bool has_unit = true;
};

/// Thrown when a certificate needed to settle the Shilov ideal is
/// INCONCLUSIVE; carries the partial search log.
class EnvelopeInconclusive : public Error {
 public:
  EnvelopeInconclusive(const std::string& what, EnvelopeResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const EnvelopeResult& partial() const { return partial_; }

 private:
  EnvelopeResult partial_;
};

/// The restriction to A of the quotient by the listed blocks, written in the
/// compact representation x -> ⊕_{k not in S} V_k* x V_k.
SubspaceMap quotient_on(const Subspace& a, const BlockStructure& bs, const std::vector<int>& ideal_blocks);

/// C*-envelope of a unital subspace: B = C*(A), its Wedderburn blocks, and
/// the largest block subset whose quotient is completely isometric on A.
/// Exhaustive for r <= 12 unless ctx.greedy; greedy otherwise, with a
/// maximality audit.
EnvelopeResult cstar_envelope(const Subspace& a, const Context& ctx = {});

/// Triple envelope. Unital inputs go through cstar_envelope; others are
/// embedded as the corner of {[[λ, x], [0, μ]]}.
EnvelopeResult triple_envelope(const Subspace& x, const Context& ctx = {});

/// The corner construction of triple_envelope, applied regardless of
/// whether x is unital.
EnvelopeResult corner_envelope(const Subspace& x, const Context& ctx = {});

/// {[[λ, x], [0, μ]] : x in X} inside M_{2d}.
Subspace corner_system(const Subspace& x, const Tolerance& tol = {});
/// [[0, x], [0, 0]].
CMat corner_embed(const CMat& x);

struct SimpleRangeResult {
  Certificate cert;
  int num_blocks = 0;
  double multiplicative_residual = 0.0;
};

/// For a unital complete isometry on a unital algebra whose range generates
/// a simple C*-algebra, certifies that T is multiplicative. Reports
/// INCONCLUSIVE ("not applicable") with the block count otherwise.
SimpleRangeResult is_simple_range_homomorphism(const SubspaceMap& t, const Context& ctx = {});

}  // namespace opalg
