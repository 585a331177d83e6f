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

#include <functional>
#include <string>
#include <vector>

#include "opalg/subspace.hpp"

namespace opalg {

/// A linear map from a subspace of M_d into M_e, stored as the images of the
/// domain's orthonormal basis.
struct SubspaceMap {
  Subspace domain;
  Eigen::Index codomain_dim = 0;
  std::vector<CMat> images;
  bool unital = false;

  /// Evaluates the map on the orthogonal projection of x onto the domain.
  CMat apply(const CMat& x) const;

  /// Builds the map by evaluating f on the domain basis.
  static SubspaceMap from_function(const Subspace& domain, Eigen::Index codomain_dim,
                                   const std::function<CMat(const CMat&)>& f);

  /// Builds the map from arbitrary (input, image) pairs; the inputs must be
  /// linearly independent and their span becomes the domain.
  static SubspaceMap from_pairs(const std::vector<CMat>& inputs, const std::vector<CMat>& outputs,
                                Eigen::Index ambient_dim, Eigen::Index codomain_dim,
                                const Tolerance& tol = {});

  Subspace range(const Tolerance& tol = {}) const;
  /// Coefficient matrix (e^2 x dim) of the map in the domain basis.
  CMat matrix() const;
};

/// x -> g(f(x)); f's codomain must contain the domain of g, or g is applied
/// through projection onto its domain.
SubspaceMap compose(const SubspaceMap& g, const SubspaceMap& f);

/// x -> u f(x) v.
SubspaceMap sandwich(const CMat& u, const SubspaceMap& f, const CMat& v);

enum class Verdict { Certified, Refuted, Inconclusive };

std::string to_string(Verdict v);

enum class WitnessKind { None, Kernel, LevelNorm, Positivity, Separating, Other };

std::string to_string(WitnessKind k);

/// Tri-state outcome of a certification routine.
struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  WitnessKind witness_kind = WitnessKind::None;
  /// Level-k witnesses are stored row-major as k*k blocks.
  std::vector<CMat> witness;
  int level = 0;
  /// Feasible object backing a CERTIFIED verdict (Choi or Gram matrix).
  CMat object;
  double residual = 0.0;
  int iterations = 0;
  /// Which map the witness refers to: "map" for T itself, or a derived map
  /// such as "paulsen" or "inverse_selfadjoint_extension".
  std::string subject = "map";
  std::string note;

  bool certified() const { return verdict == Verdict::Certified; }
  bool refuted() const { return verdict == Verdict::Refuted; }
  bool inconclusive() const { return verdict == Verdict::Inconclusive; }

  static Certificate make(Verdict v, std::string note = {});
};

/// Assembles a row-major k*k tuple into one block matrix.
CMat assemble_level(const std::vector<CMat>& blocks, int k);

}  // namespace opalg
