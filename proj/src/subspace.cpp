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

#include "opalg/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "opalg/linalg.hpp"

namespace opalg {

namespace {

// Incremental orthonormal basis with classical Gram-Schmidt applied twice.
class BasisBuilder {
 public:
  explicit BasisBuilder(Eigen::Index n) : n_(n), q_(n, std::max<Eigen::Index>(n, 1)) {}

  Eigen::Index size() const { return k_; }
  bool full() const { return k_ >= n_; }

  // Adds v when its component outside the current span exceeds threshold.
  bool try_add(const CVec& v, double threshold) {
    if (full()) return false;
    CVec r = v;
    for (int pass = 0; pass < 2 && k_ > 0; ++pass) {
      auto q = q_.leftCols(k_);
      r -= q * (q.adjoint() * r);
    }
    double rn = r.norm();
    if (!(rn > threshold) || rn == 0.0) return false;
    q_.col(k_++) = r / rn;
    return true;
  }

  CMat matrix() const { return q_.leftCols(k_); }

  // Replaces the basis by the Q factor of its own QR decomposition.
  void reorthonormalize() {
    if (k_ == 0) return;
    Eigen::HouseholderQR<CMat> h(q_.leftCols(k_));
    CMat q = h.householderQ() * CMat::Identity(n_, k_);
    // Keep orientation close to the previous basis.
    CMat r = h.matrixQR().topRows(k_).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < k_; ++i) {
      Complex d = r(i, i);
      if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    q_.leftCols(k_) = q;
  }

 private:
  Eigen::Index n_;
  CMat q_;
  Eigen::Index k_ = 0;
};

std::vector<CMat> unpack(const CMat& q, Eigen::Index d) {
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(q.cols()));
  for (Eigen::Index i = 0; i < q.cols(); ++i) out.push_back(unvectorize(q.col(i), d));
  return out;
}

void check_shape(const CMat& m, Eigen::Index d, const char* where) {
  if (m.rows() != d || m.cols() != d) {
    throw InvalidInput(std::string(where) + ": matrix shape does not match ambient dimension");
  }
}

}  // namespace

CVec vectorize(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

CMat unvectorize(const CVec& v, Eigen::Index d) { return Eigen::Map<const CMat>(v.data(), d, d); }

Subspace::Subspace(Eigen::Index ambient_dim) : d_(ambient_dim), coords_(ambient_dim * ambient_dim, 0) {}

Subspace Subspace::from_orthonormal(Eigen::Index ambient_dim, std::vector<CMat> basis) {
  Subspace s(ambient_dim);
  s.coords_.resize(ambient_dim * ambient_dim, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    check_shape(basis[i], ambient_dim, "Subspace");
    s.coords_.col(static_cast<Eigen::Index>(i)) = vectorize(basis[i]);
  }
  s.basis_ = std::move(basis);
  return s;
}

CVec Subspace::coordinates(const CMat& m) const { return coords_.adjoint() * vectorize(m); }

CMat Subspace::combine(const CVec& coefficients) const {
  if (dim() == 0) return CMat::Zero(d_, d_);
  return unvectorize(coords_ * coefficients, d_);
}

CMat Subspace::project(const CMat& m) const { return combine(coordinates(m)); }

double Subspace::distance(const CMat& m) const { return (m - project(m)).norm(); }

std::string to_string(GenMode mode) {
  switch (mode) {
    case GenMode::Algebra:
      return "algebra";
    case GenMode::StarAlgebra:
      return "star_algebra";
    case GenMode::TripleSystem:
      return "triple_system";
    case GenMode::OperatorSystem:
      return "operator_system";
  }
  return "algebra";
}

GenMode gen_mode_from_string(const std::string& s) {
  if (s == "algebra") return GenMode::Algebra;
  if (s == "star_algebra") return GenMode::StarAlgebra;
  if (s == "triple_system") return GenMode::TripleSystem;
  if (s == "operator_system") return GenMode::OperatorSystem;
  throw InvalidInput("unknown generation mode '" + s + "'");
}

Subspace span_of(const std::vector<CMat>& mats, Eigen::Index ambient_dim, const Tolerance& tol) {
  const Eigen::Index n = ambient_dim * ambient_dim;
  if (mats.empty()) return Subspace(ambient_dim);
  CMat stacked(n, static_cast<Eigen::Index>(mats.size()));
  double scale = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    check_shape(mats[i], ambient_dim, "span_of");
    stacked.col(static_cast<Eigen::Index>(i)) = vectorize(mats[i]);
    scale = std::max(scale, mats[i].norm());
  }
  if (scale == 0.0) return Subspace(ambient_dim);
  CMat range = column_space(stacked, tol.rank_tol);
  const Eigen::Index rank = range.cols();

  BasisBuilder b(n);
  for (Eigen::Index i = 0; i < stacked.cols() && b.size() < rank; ++i) {
    // Project into the numerical range first so rejected noise cannot leak in.
    CVec v = range * (range.adjoint() * stacked.col(i));
    b.try_add(v, std::sqrt(tol.rank_tol) * std::max(v.norm(), 1e-300) + tol.rank_tol * scale);
  }
  CMat q = b.size() == rank ? b.matrix() : range;
  return Subspace::from_orthonormal(ambient_dim, unpack(q, ambient_dim));
}

Subspace generate(const GeneratorSet& g, const Tolerance& tol) {
  const Eigen::Index d = g.ambient_dim;
  const Eigen::Index n = d * d;
  BasisBuilder b(n);
  double scale = 0.0;
  for (const auto& m : g.generators) {
    check_shape(m, d, "generate");
    scale = std::max(scale, m.norm());
  }
  const bool with_identity = g.mode != GenMode::TripleSystem;
  const bool with_adjoints = g.mode == GenMode::StarAlgebra || g.mode == GenMode::OperatorSystem;
  if (with_identity) scale = std::max(scale, std::sqrt(static_cast<double>(d)));

  auto add = [&](const CMat& m, double s) {
    CVec v = vectorize(m);
    return b.try_add(v, tol.rank_tol * std::max(v.norm(), s));
  };
  if (with_identity) add(CMat::Identity(d, d) / std::sqrt(static_cast<double>(d)), 1.0);
  for (const auto& m : g.generators) {
    add(m, scale);
    if (with_adjoints) add(CMat(m.adjoint()), scale);
  }
  b.reorthonormalize();

  if (g.mode != GenMode::OperatorSystem) {
    // Each round closes under one application of the products; the basis is
    // orthonormal, so products have unit scale.
    for (Eigen::Index round = 0; round < n && !b.full(); ++round) {
      const Eigen::Index before = b.size();
      std::vector<CMat> cur = unpack(b.matrix(), d);
      const std::size_t k = cur.size();
      if (g.mode == GenMode::TripleSystem) {
        std::vector<CMat> adj(k);
        for (std::size_t i = 0; i < k; ++i) adj[i] = cur[i].adjoint();
        for (std::size_t i = 0; i < k && !b.full(); ++i) {
          for (std::size_t j = 0; j < k && !b.full(); ++j) {
            CMat xy = cur[i] * adj[j];
            for (std::size_t l = 0; l < k && !b.full(); ++l) add(xy * cur[l], 1.0);
          }
        }
      } else {
        for (std::size_t i = 0; i < k && !b.full(); ++i) {
          if (with_adjoints) add(CMat(cur[i].adjoint()), 1.0);
          for (std::size_t j = 0; j < k && !b.full(); ++j) add(cur[i] * cur[j], 1.0);
        }
      }
      b.reorthonormalize();
      if (b.size() == before) break;
    }
  }

  Subspace s = Subspace::from_orthonormal(d, unpack(b.matrix(), d));
  switch (g.mode) {
    case GenMode::Algebra:
      s.flags.unital = true;
      s.flags.algebra = true;
      break;
    case GenMode::StarAlgebra:
      s.flags.unital = true;
      s.flags.algebra = true;
      s.flags.star_algebra = true;
      s.flags.selfadjoint = true;
      s.flags.triple_system = true;
      break;
    case GenMode::TripleSystem:
      s.flags.triple_system = true;
      break;
    case GenMode::OperatorSystem:
      s.flags.unital = true;
      s.flags.selfadjoint = true;
      break;
  }
  if (g.mode == GenMode::Algebra) {
    if (auto sizes = detect_nest(s, tol)) {
      s.nest = NestPattern{*sizes, CMat::Identity(d, d)};
    }
  }
  return s;
}

bool contains(const Subspace& s, const CMat& m, const Tolerance& tol) {
  check_shape(m, s.ambient_dim(), "contains");
  double nm = m.norm();
  if (nm == 0.0) return true;
  return s.distance(m) <= tol.cert_tol * nm;
}

bool contains_all(const Subspace& outer, const Subspace& inner, const Tolerance& tol) {
  for (const auto& b : inner.basis()) {
    if (!contains(outer, b, tol)) return false;
  }
  return true;
}

bool same_subspace(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  return a.dim() == b.dim() && contains_all(a, b, tol) && contains_all(b, a, tol);
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim() || a.ambient_dim() != b.ambient_dim()) return 1.0;
  if (a.dim() == 0) return 0.0;
  // sin of the largest principal angle as ‖(1 - P_A) Q_B‖; sqrt(1 - cos²)
  // loses half the digits.
  const CMat& qa = a.coordinate_matrix();
  const CMat& qb = b.coordinate_matrix();
  CMat residual = qb - qa * (qa.adjoint() * qb);
  Eigen::JacobiSVD<CMat> s(residual);
  return std::min(1.0, s.singularValues()(0));
}

Subspace adjoint(const Subspace& s) {
  std::vector<CMat> adj;
  adj.reserve(s.basis().size());
  for (const auto& b : s.basis()) adj.push_back(b.adjoint());
  Subspace out = Subspace::from_orthonormal(s.ambient_dim(), std::move(adj));
  out.flags = s.flags;
  return out;
}

Subspace sum(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  std::vector<CMat> all = a.basis();
  all.insert(all.end(), b.basis().begin(), b.basis().end());
  return span_of(all, a.ambient_dim(), tol);
}

Subspace intersection(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  const Eigen::Index d = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace(d);
  // Pairs (c, c') with Q_a c = Q_b c' span the kernel of [Q_a, -Q_b].
  CMat stacked(d * d, a.dim() + b.dim());
  stacked << a.coordinate_matrix(), -b.coordinate_matrix();
  CMat ker = null_space(stacked, std::max(tol.rank_tol, 1e-7));
  std::vector<CMat> mats;
  for (Eigen::Index i = 0; i < ker.cols(); ++i) {
    mats.push_back(a.combine(ker.col(i).head(a.dim())));
  }
  return span_of(mats, d, tol);
}

Subspace diag_part(const Subspace& a, const Tolerance& tol) {
  Subspace out = intersection(a, adjoint(a), tol);
  out.flags.selfadjoint = true;
  if (a.flags.unital) out.flags.unital = true;
  if (a.flags.algebra) {
    out.flags.algebra = true;
    out.flags.star_algebra = true;
    out.flags.triple_system = true;
  }
  return out;
}

bool is_dirichlet(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  if (!contains_all(b, a, tol)) throw InvalidInput("is_dirichlet: A is not contained in B");
  Subspace s = sum(a, adjoint(a), tol);
  return s.dim() == b.dim();
}

bool check_unital(const Subspace& s, const Tolerance& tol) {
  return contains(s, CMat::Identity(s.ambient_dim(), s.ambient_dim()), tol);
}

bool check_selfadjoint(const Subspace& s, const Tolerance& tol) {
  for (const auto& b : s.basis()) {
    if (!contains(s, b.adjoint(), tol)) return false;
  }
  return true;
}

bool check_algebra(const Subspace& s, const Tolerance& tol) {
  // Measured against |x||y| rather than |xy|: products that vanish exactly
  // come out at roundoff size after a change of basis.
  for (const auto& x : s.basis()) {
    for (const auto& y : s.basis()) {
      if (s.distance(x * y) > tol.cert_tol * x.norm() * y.norm()) return false;
    }
  }
  return true;
}

bool check_triple_system(const Subspace& s, const Tolerance& tol) {
  for (const auto& x : s.basis()) {
    for (const auto& y : s.basis()) {
      CMat xy = x * y.adjoint();
      for (const auto& z : s.basis()) {
        if (s.distance(xy * z) > tol.cert_tol * x.norm() * y.norm() * z.norm()) return false;
      }
    }
  }
  return true;
}

Subspace conjugate(const Subspace& s, const CMat& u, const Tolerance& tol) {
  check_shape(u, s.ambient_dim(), "conjugate");
  if ((u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).norm() > 1e-8 * u.rows()) {
    throw InvalidInput("conjugate: matrix is not unitary");
  }
  std::vector<CMat> mats;
  mats.reserve(s.basis().size());
  for (const auto& b : s.basis()) mats.push_back(u * b * u.adjoint());
  Subspace out = span_of(mats, s.ambient_dim(), tol);
  out.flags = s.flags;
  if (s.nest) out.nest = NestPattern{s.nest->block_sizes, u * s.nest->unitary};
  return out;
}

Subspace similarity(const Subspace& s, const CMat& x, const Tolerance& tol) {
  check_shape(x, s.ambient_dim(), "similarity");
  Eigen::FullPivLU<CMat> lu(x);
  if (!lu.isInvertible()) throw InvalidInput("similarity: matrix is not invertible");
  CMat xinv = lu.inverse();
  std::vector<CMat> mats;
  for (const auto& b : s.basis()) mats.push_back(x * b * xinv);
  Subspace out = span_of(mats, s.ambient_dim(), tol);
  out.flags.unital = s.flags.unital;
  out.flags.algebra = s.flags.algebra;
  return out;
}

Subspace full_algebra(Eigen::Index d) {
  std::vector<CMat> units;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) units.push_back(matrix_unit(d, i, j));
  }
  Subspace s = Subspace::from_orthonormal(d, std::move(units));
  s.flags = {true, true, true, true, true};
  s.nest = NestPattern{{static_cast<int>(d)}, CMat::Identity(d, d)};
  return s;
}

Subspace scalars(Eigen::Index d) {
  Subspace s = Subspace::from_orthonormal(
      d, {CMat::Identity(d, d) / std::sqrt(static_cast<double>(d))});
  s.flags = {true, true, true, true, true};
  return s;
}

Subspace diagonal_algebra(Eigen::Index d) {
  std::vector<CMat> units;
  for (Eigen::Index i = 0; i < d; ++i) units.push_back(matrix_unit(d, i, i));
  Subspace s = Subspace::from_orthonormal(d, std::move(units));
  s.flags = {true, true, true, true, true};
  return s;
}

Subspace block_upper_triangular(const std::vector<int>& block_sizes) {
  Eigen::Index d = 0;
  std::vector<Eigen::Index> block_of;
  for (std::size_t k = 0; k < block_sizes.size(); ++k) {
    if (block_sizes[k] <= 0) throw InvalidInput("block sizes must be positive");
    for (int i = 0; i < block_sizes[k]; ++i) block_of.push_back(static_cast<Eigen::Index>(k));
    d += block_sizes[k];
  }
  std::vector<CMat> units;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (block_of[static_cast<std::size_t>(i)] <= block_of[static_cast<std::size_t>(j)]) {
        units.push_back(matrix_unit(d, i, j));
      }
    }
  }
  Subspace s = Subspace::from_orthonormal(d, std::move(units));
  s.flags.unital = true;
  s.flags.algebra = true;
  if (block_sizes.size() <= 1) {
    s.flags = {true, true, true, true, true};
  }
  s.nest = NestPattern{block_sizes, CMat::Identity(d, d)};
  return s;
}

Subspace block_diagonal_algebra(const std::vector<int>& block_sizes) {
  Eigen::Index d = 0;
  std::vector<CMat> units;
  for (int n : block_sizes) {
    if (n <= 0) throw InvalidInput("block sizes must be positive");
    d += n;
  }
  Eigen::Index start = 0;
  for (int n : block_sizes) {
    for (Eigen::Index j = start; j < start + n; ++j) {
      for (Eigen::Index i = start; i < start + n; ++i) units.push_back(matrix_unit(d, i, j));
    }
    start += n;
  }
  Subspace s = Subspace::from_orthonormal(d, std::move(units));
  s.flags = {true, true, true, true, true};
  return s;
}

Subspace upper_triangular(Eigen::Index n) {
  return block_upper_triangular(std::vector<int>(static_cast<std::size_t>(n), 1));
}

std::optional<std::vector<int>> detect_nest(const Subspace& s, const Tolerance& tol) {
  const Eigen::Index d = s.ambient_dim();
  if (d == 0 || d > 12) return std::nullopt;
  // Enumerate compositions of d through the bitmask of cut points.
  const std::uint32_t masks = 1u << (d - 1);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<int> sizes;
    int cur = 1;
    for (Eigen::Index i = 0; i + 1 < d; ++i) {
      if (mask & (1u << i)) {
        sizes.push_back(cur);
        cur = 1;
      } else {
        ++cur;
      }
    }
    sizes.push_back(cur);
    Eigen::Index expected = 0;
    for (std::size_t a = 0; a < sizes.size(); ++a) {
      for (std::size_t b = a; b < sizes.size(); ++b) expected += sizes[a] * sizes[b];
    }
    if (expected != s.dim()) continue;
    std::vector<Eigen::Index> block_of;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      for (int i = 0; i < sizes[k]; ++i) block_of.push_back(static_cast<Eigen::Index>(k));
    }
    bool inside = true;
    for (const auto& b : s.basis()) {
      double below = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
          if (block_of[static_cast<std::size_t>(i)] > block_of[static_cast<std::size_t>(j)]) {
            below += std::norm(b(i, j));
          }
        }
      }
      if (std::sqrt(below) > tol.cert_tol) {
        inside = false;
        break;
      }
    }
    if (inside) return sizes;
  }
  return std::nullopt;
}

}  // namespace opalg
