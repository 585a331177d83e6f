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
#include "opalg/subspace.hpp"

namespace opalg {

/// Block decomposition B = ⊕_k W_k (M_{n_k} ⊗ 1_{m_k}) W_k* of a unital
/// *-subalgebra of M_d.
struct BlockStructure {
  int num_blocks = 0;
  std::vector<CMat> central_projections;
  std::vector<int> block_dims;
  std::vector<int> multiplicities;
  /// Columns of block k occupy [offsets[k], offsets[k] + n_k m_k), ordered so
  /// that column j*m_k + c is copy c of basis vector j.
  CMat basis_unitary;
  std::vector<Eigen::Index> offsets;
  /// d x n_k isometries onto the first copy of each block. x -> V_k* x V_k is
  /// the k-th irreducible representation of B.
  std::vector<CMat> block_isometries;

  /// V_k* x V_k.
  CMat compress(int k, const CMat& x) const;
  /// The element of p_k B p_k corresponding to X in M_{n_k}.
  CMat embed(int k, const CMat& x) const;
  /// Block-diagonal direct sum of compress(k, x) over the listed blocks.
  CMat represent(const std::vector<int>& blocks, const CMat& x) const;
  /// Sum of the central projections of the listed blocks.
  CMat projection(const std::vector<int>& blocks) const;
  /// Largest residual of the structural invariants against B.
  double verify(const Subspace& b) const;
};

/// {x : xb = bx for every b in B}.
Subspace commutant(const Subspace& b, const Tolerance& tol = {});
/// B ∩ B'.
Subspace center(const Subspace& b, const Tolerance& tol = {});

/// Wedderburn decomposition of a unital *-algebra. Blocks are ordered by the
/// first standard basis index they occupy. Throws StructureFailure when the
/// constructed data fails verification after five randomized attempts.
BlockStructure wedderburn(const Subspace& b, const Context& ctx = {});

/// Sum of p_k B over k in blocks.
Subspace ideal_of_blocks(const BlockStructure& bs, const Subspace& b, const std::vector<int>& blocks,
                         const Tolerance& tol = {});

/// x -> (1 - p_S) x (1 - p_S) on B.
SubspaceMap quotient_map(const BlockStructure& bs, const Subspace& b, const std::vector<int>& blocks);

/// Blocks not listed in S, in increasing order.
std::vector<int> complement_blocks(int num_blocks, const std::vector<int>& s);

}  // namespace opalg
