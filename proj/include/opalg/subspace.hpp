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

#include "opalg/types.hpp"

namespace opalg {

/// Cached structural verdicts. A set flag is always re-verifiable by the
/// matching check_* function below.
struct SubspaceFlags {
  bool unital = false;
  bool selfadjoint = false;
  bool algebra = false;
  bool star_algebra = false;
  bool triple_system = false;
};

/// Records that a subspace equals U * (block upper triangular algebra) * U*
/// for the given diagonal block sizes. Only subspaces carrying this record
/// support constructive factorization.
struct NestPattern {
  std::vector<int> block_sizes;
  CMat unitary;
};

/// A linear subspace of M_d held as a Hilbert-Schmidt orthonormal basis.
class Subspace {
 public:
  explicit Subspace(Eigen::Index ambient_dim = 0);

  /// Takes ownership of an already orthonormal basis (not re-checked).
  static Subspace from_orthonormal(Eigen::Index ambient_dim, std::vector<CMat> basis);

  Eigen::Index ambient_dim() const { return d_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis_.size()); }
  const std::vector<CMat>& basis() const { return basis_; }
  const CMat& basis_element(Eigen::Index i) const { return basis_[static_cast<std::size_t>(i)]; }

  /// d^2 x dim matrix whose columns are the vectorized basis elements.
  const CMat& coordinate_matrix() const { return coords_; }

  /// Hilbert-Schmidt coefficients <m, b_i>.
  CVec coordinates(const CMat& m) const;
  CMat combine(const CVec& coefficients) const;
  /// Orthogonal projection onto the subspace.
  CMat project(const CMat& m) const;
  /// Hilbert-Schmidt distance from m to the subspace.
  double distance(const CMat& m) const;

  SubspaceFlags flags;
  std::optional<NestPattern> nest;

 private:
  Eigen::Index d_;
  std::vector<CMat> basis_;
  CMat coords_;
};

enum class GenMode { Algebra, StarAlgebra, TripleSystem, OperatorSystem };

std::string to_string(GenMode mode);
GenMode gen_mode_from_string(const std::string& s);

struct GeneratorSet {
  Eigen::Index ambient_dim = 0;
  std::vector<CMat> generators;
  GenMode mode = GenMode::Algebra;
};

CVec vectorize(const CMat& m);
CMat unvectorize(const CVec& v, Eigen::Index d);

/// Orthonormal basis of span(mats). The dimension is the numerical rank at
/// tol.rank_tol; when possible the basis is the Gram-Schmidt basis of the
/// inputs taken in order.
Subspace span_of(const std::vector<CMat>& mats, Eigen::Index ambient_dim, const Tolerance& tol = {});

/// Smallest subspace containing the generators (plus the identity, except
/// for triple systems) closed under the operations of the mode.
Subspace generate(const GeneratorSet& g, const Tolerance& tol = {});

bool contains(const Subspace& s, const CMat& m, const Tolerance& tol = {});
bool contains_all(const Subspace& outer, const Subspace& inner, const Tolerance& tol = {});
bool same_subspace(const Subspace& a, const Subspace& b, const Tolerance& tol = {});

/// Largest principal-angle sine between equal-dimensional subspaces (1 when
/// dimensions differ).
double subspace_distance(const Subspace& a, const Subspace& b);

Subspace adjoint(const Subspace& s);
Subspace sum(const Subspace& a, const Subspace& b, const Tolerance& tol = {});
Subspace intersection(const Subspace& a, const Subspace& b, const Tolerance& tol = {});

/// The diagonal A ∩ A* of a subspace.
Subspace diag_part(const Subspace& a, const Tolerance& tol = {});

/// span(A ∪ A*) equals B. Throws InvalidInput when A is not inside B.
bool is_dirichlet(const Subspace& a, const Subspace& b, const Tolerance& tol = {});

bool check_unital(const Subspace& s, const Tolerance& tol = {});
bool check_selfadjoint(const Subspace& s, const Tolerance& tol = {});
bool check_algebra(const Subspace& s, const Tolerance& tol = {});
bool check_triple_system(const Subspace& s, const Tolerance& tol = {});

/// u S u* for unitary u; nest records are carried along.
Subspace conjugate(const Subspace& s, const CMat& u, const Tolerance& tol = {});
/// x S x^{-1} for invertible x.
Subspace similarity(const Subspace& s, const CMat& x, const Tolerance& tol = {});

Subspace full_algebra(Eigen::Index d);
Subspace scalars(Eigen::Index d);
Subspace diagonal_algebra(Eigen::Index d);
/// Upper triangular matrices T_n, flagged nest-type.
Subspace upper_triangular(Eigen::Index n);
/// Block upper triangular matrices for the given diagonal block sizes,
/// flagged nest-type.
Subspace block_upper_triangular(const std::vector<int>& block_sizes);

/// ⊕_k M_{n_k} placed block-diagonally in M_d, d = Σ n_k.
Subspace block_diagonal_algebra(const std::vector<int>& block_sizes);

/// Looks for a block upper triangular pattern (in the standard basis) equal
/// to s; returns the block sizes when found.
std::optional<std::vector<int>> detect_nest(const Subspace& s, const Tolerance& tol = {});

}  // namespace opalg
