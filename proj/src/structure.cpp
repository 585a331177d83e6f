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

#include "opalg/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "opalg/linalg.hpp"

namespace opalg {

namespace {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

int round_int(double x, const char* what) {
  double r = std::round(x);
  if (std::abs(x - r) > 1e-6) throw StructureFailure(std::string("non-integral ") + what);
  return static_cast<int>(r);
}

CMat random_element(const Subspace& s, Rng& rng) {
  CVec c = random_gaussian(s.dim(), 1, rng);
  return s.combine(c);
}

// Splits sorted values into groups at gaps wider than rel * spread.
std::vector<std::pair<Eigen::Index, Eigen::Index>> cluster(const RVec& sorted, double rel) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> groups;
  const Eigen::Index n = sorted.size();
  if (n == 0) return groups;
  double spread = sorted(n - 1) - sorted(0);
  Eigen::Index start = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (sorted(i + 1) - sorted(i) > rel * spread) {
      groups.emplace_back(start, i + 1);
      start = i + 1;
    }
  }
  groups.emplace_back(start, n);
  return groups;
}

struct Attempt {
  bool ok = false;
  BlockStructure bs;
};

Attempt try_decompose(const Subspace& b, const Subspace& z, Rng& rng, const Tolerance& tol) {
  const Eigen::Index d = b.ambient_dim();
  const int r = static_cast<int>(z.dim());
  Attempt out;

  // Central projections from one random central Hermitian element.
  std::vector<CMat> projections;
  if (r == 1) {
    projections.push_back(CMat::Identity(d, d));
  } else {
    CMat h = random_element(z, rng);
    h = (0.5 * (h + h.adjoint())).eval();
    HermEig e = herm_eig(h);
    auto groups = cluster(e.values, 1e-6);
    if (static_cast<int>(groups.size()) != r) return out;
    for (auto [lo, hi] : groups) {
      CMat v = e.vectors.middleCols(lo, hi - lo);
      projections.push_back(v * v.adjoint());
    }
  }

  struct Block {
    CMat p;
    int n = 0, m = 0;
    CMat w;  // d x (n m)
    Eigen::Index first = 0;
  };
  std::vector<Block> blocks;
  for (const CMat& p : projections) {
    Block blk;
    blk.p = p;
    std::vector<CMat> cut;
    for (const auto& x : b.basis()) cut.push_back(p * x * p);
    Subspace pbp = span_of(cut, d, tol);
    const int dim = static_cast<int>(pbp.dim());
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
    if (n * n != dim || n == 0) return out;
    const int rank = round_int(p.trace().real(), "projection rank");
    if (rank % n != 0) return out;
    const int m = rank / n;
    blk.n = n;
    blk.m = m;
    CMat range = column_space(p, 1e-6);
    if (range.cols() != rank) return out;

    if (n == 1) {
      blk.w = range;
    } else {
      CMat y = random_element(pbp, rng);
      y = (0.5 * (y + y.adjoint())).eval();
      HermEig ey = herm_eig(CMat(range.adjoint() * y * range));
      auto groups = cluster(ey.values, 1e-6);
      if (static_cast<int>(groups.size()) != n) return out;
      std::vector<CMat> minimal;
      for (auto [lo, hi] : groups) {
        if (hi - lo != m) return out;
        CMat v = range * ey.vectors.middleCols(lo, hi - lo);
        minimal.push_back(v * v.adjoint());
      }
      CMat f = range * ey.vectors.leftCols(m);
      CMat x = random_element(pbp, rng);
      blk.w.resize(d, static_cast<Eigen::Index>(n) * m);
      blk.w.leftCols(m) = f;
      for (int j = 1; j < n; ++j) {
        CMat e1j = minimal[0] * x * minimal[static_cast<std::size_t>(j)];
        double scale = std::sqrt(e1j.squaredNorm() / m);
        if (scale < 1e-6 * x.norm()) return out;
        e1j /= scale;
        blk.w.middleCols(static_cast<Eigen::Index>(j) * m, m) = e1j.adjoint() * f;
      }
    }
    blk.first = d;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::abs(p(i, i)) > 1e-6) {
        blk.first = i;
        break;
      }
    }
    blocks.push_back(std::move(blk));
  }
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& c) {
    if (a.first != c.first) return a.first < c.first;
    return a.n * a.m > c.n * c.m;
  });

  BlockStructure& bs = out.bs;
  bs.num_blocks = r;
  bs.basis_unitary.resize(d, d);
  Eigen::Index off = 0;
  for (const auto& blk : blocks) {
    if (off + blk.w.cols() > d) return out;
    bs.central_projections.push_back(blk.p);
    bs.block_dims.push_back(blk.n);
    bs.multiplicities.push_back(blk.m);
    bs.offsets.push_back(off);
    bs.basis_unitary.middleCols(off, blk.w.cols()) = blk.w;
    CMat v(d, blk.n);
    for (int j = 0; j < blk.n; ++j) v.col(j) = blk.w.col(static_cast<Eigen::Index>(j) * blk.m);
    bs.block_isometries.push_back(v);
    off += blk.w.cols();
  }
  if (off != d) return out;
  out.ok = bs.verify(b) <= tol.cert_tol;
  return out;
}

}  // namespace

CMat BlockStructure::compress(int k, const CMat& x) const {
  const CMat& v = block_isometries.at(static_cast<std::size_t>(k));
  return v.adjoint() * x * v;
}

CMat BlockStructure::embed(int k, const CMat& x) const {
  const auto kk = static_cast<std::size_t>(k);
  const int n = block_dims.at(kk);
  const int m = multiplicities[kk];
  if (x.rows() != n || x.cols() != n) throw InvalidInput("embed: block shape mismatch");
  CMat w = basis_unitary.middleCols(offsets[kk], static_cast<Eigen::Index>(n) * m);
  CMat amp = CMat::Zero(static_cast<Eigen::Index>(n) * m, static_cast<Eigen::Index>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int c = 0; c < m; ++c) amp(i * m + c, j * m + c) = x(i, j);
    }
  }
  return w * amp * w.adjoint();
}

CMat BlockStructure::represent(const std::vector<int>& blocks, const CMat& x) const {
  Eigen::Index total = 0;
  for (int k : blocks) total += block_dims.at(static_cast<std::size_t>(k));
  CMat out = CMat::Zero(total, total);
  Eigen::Index off = 0;
  for (int k : blocks) {
    const int n = block_dims[static_cast<std::size_t>(k)];
    out.block(off, off, n, n) = compress(k, x);
    off += n;
  }
  return out;
}

CMat BlockStructure::projection(const std::vector<int>& blocks) const {
  const Eigen::Index d = basis_unitary.rows();
  CMat p = CMat::Zero(d, d);
  for (int k : blocks) p += central_projections.at(static_cast<std::size_t>(k));
  return p;
}

double BlockStructure::verify(const Subspace& b) const {
  const Eigen::Index d = basis_unitary.rows();
  const CMat id = CMat::Identity(d, d);
  double worst = (basis_unitary.adjoint() * basis_unitary - id).norm();
  CMat total = CMat::Zero(d, d);
  for (int k = 0; k < num_blocks; ++k) {
    const CMat& p = central_projections[static_cast<std::size_t>(k)];
    total += p;
    worst = std::max(worst, (p - p.adjoint()).norm());
    worst = std::max(worst, (p * p - p).norm());
    for (int j = k + 1; j < num_blocks; ++j) {
      worst = std::max(worst, (p * central_projections[static_cast<std::size_t>(j)]).norm());
    }
    for (const auto& x : b.basis()) worst = std::max(worst, (p * x - x * p).norm());
  }
  worst = std::max(worst, (total - id).norm());
  int sum_nm = 0;
  int sum_n2 = 0;
  for (int k = 0; k < num_blocks; ++k) {
    sum_nm += block_dims[static_cast<std::size_t>(k)] * multiplicities[static_cast<std::size_t>(k)];
    sum_n2 += block_dims[static_cast<std::size_t>(k)] * block_dims[static_cast<std::size_t>(k)];
  }
  if (sum_nm != d || sum_n2 != b.dim()) return 1.0;
  // Every basis element must be reproduced from its block compressions.
  for (const auto& x : b.basis()) {
    CMat rebuilt = CMat::Zero(d, d);
    for (int k = 0; k < num_blocks; ++k) rebuilt += embed(k, compress(k, x));
    worst = std::max(worst, (rebuilt - x).norm());
  }
  return worst;
}

Subspace commutant(const Subspace& b, const Tolerance& tol) {
  (void)tol;
  const Eigen::Index d = b.ambient_dim();
  const Eigen::Index n = d * d;
  const CMat id = CMat::Identity(d, d);
  // Gram matrix of the stacked commutator maps x -> xb - bx acting on
  // column-major vec(x).
  CMat g = CMat::Zero(n, n);
  CMat left = CMat::Zero(d, d);
  CMat right = CMat::Zero(d, d);
  for (const auto& x : b.basis()) {
    left += (x * x.adjoint()).conjugate();
    right += x.adjoint() * x;
    g -= kron(x.conjugate(), x);
    g -= kron(x.transpose(), x.adjoint());
  }
  g += kron(left, id) + kron(id, right);
  g = (0.5 * (g + g.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<CMat> es(g);
  double top = std::max(es.eigenvalues()(n - 1), 0.0);
  std::vector<CMat> mats;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (es.eigenvalues()(i) <= 1e-10 * top || top == 0.0) {
      mats.push_back(unvectorize(es.eigenvectors().col(i), d));
    }
  }
  Subspace s = Subspace::from_orthonormal(d, std::move(mats));
  s.flags = {true, true, true, true, true};
  return s;
}

Subspace center(const Subspace& b, const Tolerance& tol) {
  Subspace z = intersection(b, commutant(b, tol), tol);
  z.flags = {true, true, true, true, true};
  return z;
}

BlockStructure wedderburn(const Subspace& b, const Context& ctx) {
  const Eigen::Index d = b.ambient_dim();
  if (d == 0 || b.dim() == 0) throw InvalidInput("wedderburn: empty algebra");
  if (!check_unital(b, ctx.tol) || !check_selfadjoint(b, ctx.tol)) {
    throw InvalidInput("wedderburn: input is not a unital selfadjoint algebra");
  }
  Subspace z = center(b, ctx.tol);
  if (z.dim() == 0) throw StructureFailure("wedderburn: empty center");
  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(derive_seed(ctx.seed, "wedderburn/" + std::to_string(attempt)));
    Attempt a = try_decompose(b, z, rng, ctx.tol);
    if (a.ok) return a.bs;
  }
  throw StructureFailure("wedderburn: block data failed verification after 5 attempts");
}

Subspace ideal_of_blocks(const BlockStructure& bs, const Subspace& b, const std::vector<int>& blocks,
                         const Tolerance& tol) {
  CMat p = bs.projection(blocks);
  std::vector<CMat> mats;
  for (const auto& x : b.basis()) mats.push_back(p * x);
  Subspace s = span_of(mats, b.ambient_dim(), tol);
  s.flags.selfadjoint = true;
  s.flags.algebra = true;
  s.flags.triple_system = true;
  return s;
}

SubspaceMap quotient_map(const BlockStructure& bs, const Subspace& b, const std::vector<int>& blocks) {
  const Eigen::Index d = b.ambient_dim();
  CMat q = CMat::Identity(d, d) - bs.projection(blocks);
  return SubspaceMap::from_function(b, d, [&](const CMat& x) { return CMat(q * x * q); });
}

std::vector<int> complement_blocks(int num_blocks, const std::vector<int>& s) {
  std::vector<int> out;
  for (int k = 0; k < num_blocks; ++k) {
    if (std::find(s.begin(), s.end(), k) == s.end()) out.push_back(k);
  }
  return out;
}

}  // namespace opalg
