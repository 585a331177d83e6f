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

#include "opalg/types.hpp"

namespace opalg {

/// Largest singular value. The empty matrix has norm 0.
double op_norm(const CMat& m);

/// Hilbert-Schmidt inner product trace(y* x).
Complex hs_inner(const CMat& x, const CMat& y);
double hs_norm(const CMat& m);

bool is_hermitian(const CMat& m, double rel_tol);

struct HermEig {
  RVec values;   // ascending
  CMat vectors;  // unitary, columns are eigenvectors
};

/// Spectral decomposition of a Hermitian matrix. The input is symmetrized
/// first; inputs whose anti-Hermitian part exceeds 1e-6 * ||M|| are rejected
/// with InvalidInput.
HermEig herm_eig(const CMat& m);

double lambda_min(const CMat& hermitian);

struct Svd {
  CMat u;
  RVec s;  // descending
  CMat v;
};

/// Full SVD, m = u * diag(s) * v*.
Svd svd(const CMat& m);

struct Qr {
  CMat q;  // unitary
  CMat r;  // upper triangular, real non-negative diagonal
};

Qr qr(const CMat& m);

/// Upper triangular R with positive diagonal and R* R = p. Requires
/// lambda_min(p) > tol.cert_tol, otherwise throws NotStrictlyPositive.
CMat cholesky_upper(const CMat& p, const Tolerance& tol = {});

struct Polar {
  CMat unitary;
  CMat modulus;  // |M| = (M* M)^{1/2}
};

/// m = unitary * modulus. For singular m the unitary is one of the valid
/// completions.
Polar polar(const CMat& m);

/// Assembles a k x l block matrix whose blocks share one shape.
CMat amplify(const std::vector<std::vector<CMat>>& blocks);

/// Orthogonal projection onto the PSD cone (negative eigenvalues clipped).
CMat psd_part(const CMat& hermitian);

CMat psd_sqrt(const CMat& psd);

/// Orthonormal basis (as columns) of the null space of m; singular values
/// below rel_tol * max(sigma_max, 1e-300) count as zero.
CMat null_space(const CMat& m, double rel_tol);

/// Orthonormal basis of the column space, same thresholding as null_space.
CMat column_space(const CMat& m, double rel_tol);

/// Projection onto the range of a PSD matrix, eigenvalues thresholded
/// relative to the largest.
CMat range_projection(const CMat& psd, double rel_tol);

/// Orthonormal completion: returns columns spanning the orthogonal
/// complement of the (orthonormal) columns of v in C^n.
CMat orthogonal_complement(const CMat& v, Eigen::Index n);

CMat matrix_unit(Eigen::Index d, Eigen::Index i, Eigen::Index j);

CMat random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);
CMat random_unitary(Eigen::Index n, Rng& rng);
CMat random_hermitian(Eigen::Index n, Rng& rng);

}  // namespace opalg
