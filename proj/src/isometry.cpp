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

#include "opalg/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opalg/envelope.hpp"
#include "opalg/linalg.hpp"

namespace opalg {

namespace {

double image_scale(const SubspaceMap& t) {
  double s = 1.0;
  for (const auto& m : t.images) s = std::max(s, op_norm(m));
  return s;
}

// b -> f(b) is injective on the subspace.
bool injective_on(const Subspace& b, const std::function<CMat(const CMat&)>& f, const Tolerance& tol) {
  if (b.dim() == 0) return true;
  const Eigen::Index d = b.ambient_dim();
  CMat m(d * d, b.dim());
  for (Eigen::Index i = 0; i < b.dim(); ++i) m.col(i) = vectorize(f(b.basis_element(i)));
  if (m.norm() == 0.0) return false;
  // Cutoff relative to the unit-norm basis, not to the largest image.
  Svd s = svd(m);
  return s.s(s.s.size() - 1) > tol.rank_tol * 1e3;
}

// Rotates each column so its largest entry is real and positive.
CMat fix_phases(CMat m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index i = 0;
    m.col(j).cwiseAbs().maxCoeff(&i);
    Complex c = m(i, j);
    if (std::abs(c) > 0.0) m.col(j) *= std::conj(c) / std::abs(c);
  }
  return m;
}

void require(double residual, double bound, const std::string& what) {
  if (!(residual <= bound)) {
    throw StructureFailure(what + " (residual " + std::to_string(residual) + ")");
  }
}

}  // namespace

double multiplicativity_defect(const SubspaceMap& f) {
  double worst = 0.0;
  const auto& b = f.domain.basis();
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      worst = std::max(worst, op_norm(f.apply(b[i] * b[j]) - f.images[i] * f.images[j]));
    }
  }
  return worst;
}

IsometryAnalysis analyze(const SubspaceMap& t, const Context& ctx, const std::optional<Subspace>& codomain_algebra) {
  const Tolerance& tol = ctx.tol;
  const Eigen::Index d = t.domain.ambient_dim();
  const Eigen::Index e = t.codomain_dim;
  const CMat id_d = CMat::Identity(d, d);
  const CMat id_e = CMat::Identity(e, e);
  if (!contains(t.domain, id_d, tol)) throw InvalidInput("analyze: domain is not unital");
  if (!check_algebra(t.domain, tol)) throw InvalidInput("analyze: domain is not an algebra");

  IsometryAnalysis out;
  out.verdict = complete_isometry(t, ctx);
  if (!out.verdict.certified()) return out;

  // Largest triple ideal N of Z = TRO(T(A)) whose quotient stays completely
  // isometric on T(A), read off the corner envelope of the range.
  Subspace range = t.range(tol);
  EnvelopeResult env = corner_envelope(range, ctx);
  out.ideal_blocks = env.shilov_blocks;
  const CMat proj = env.structure.projection(env.shilov_blocks);
  const CMat qs = proj.topLeftCorner(e, e);
  const CMat ps = proj.bottomRightCorner(e, e);
  Subspace z = generate({e, range.basis(), GenMode::TripleSystem}, tol);
  CMat left = CMat::Zero(e, e);
  CMat right = CMat::Zero(e, e);
  std::vector<CMat> nbasis;
  for (const auto& zb : z.basis()) {
    CMat n = qs * zb * ps;
    left += n * n.adjoint();
    right += n.adjoint() * n;
    nbasis.push_back(n);
  }
  out.ideal_dim = static_cast<int>(span_of(nbasis, e, tol).dim());
  out.q = out.ideal_dim > 0 ? range_projection(left, tol.rank_tol * 1e3) : CMat(CMat::Zero(e, e));
  out.p = out.ideal_dim > 0 ? range_projection(right, tol.rank_tol * 1e3) : CMat(CMat::Zero(e, e));
  const CMat keep = id_e - out.p;

  const CMat t1 = t.apply(id_d);
  out.u = t1 * keep;
  const CMat u = out.u;
  out.theta = SubspaceMap::from_function(t.domain, e, [&](const CMat& a) { return CMat(u.adjoint() * t.apply(a) * keep); });

  const double scale = image_scale(t);
  out.partial_isometry_residual = op_norm(u * u.adjoint() * u - u);
  require(out.partial_isometry_residual, tol.cert_tol * scale, "analyze: T(1)(1 - p) is not a partial isometry");

  const auto& basis = t.domain.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const CMat& th = out.theta.images[i];
    out.support_residual = std::max(out.support_residual, op_norm(u.adjoint() * u * th - th));
    out.factor_residual = std::max(out.factor_residual, op_norm(t.images[i] * keep - u * th));
    for (std::size_t j = 0; j < basis.size(); ++j) {
      CMat ab = basis[i] * basis[j];
      out.star_identity_residual =
          std::max(out.star_identity_residual,
                   op_norm(t.apply(ab) * keep - t.images[i] * t1.adjoint() * t.images[j] * keep));
    }
  }
  out.multiplicative_residual = multiplicativity_defect(out.theta);
  const double bound = tol.cert_tol * scale * scale * scale;
  require(out.support_residual, bound, "analyze: u* u θ(a) differs from θ(a)");
  require(out.factor_residual, bound, "analyze: T(a)(1 - p) differs from u θ(a)");
  require(out.multiplicative_residual, bound, "analyze: θ is not multiplicative");
  require(out.star_identity_residual, bound, "analyze: T(ab)(1 - p) differs from T(a) T(1)* T(b)(1 - p)");

  Subspace b = codomain_algebra ? *codomain_algebra : generate({e, range.basis(), GenMode::Algebra}, tol);
  out.flags.shilov = out.ideal_dim == 0;
  out.flags.left_type1 = injective_on(b, [&](const CMat& x) { return CMat(x * keep); }, tol);
  const CMat keep_left = id_e - out.q;
  out.flags.right_type1 = injective_on(b, [&](const CMat& x) { return CMat(keep_left * x); }, tol);

  if (same_subspace(t.domain, upper_triangular(d), tol)) out.block_form = block_form_from(t, out, tol);
  return out;
}

BlockForm block_form_from(const SubspaceMap& t, const IsometryAnalysis& analysis, const Tolerance& tol) {
  const Eigen::Index n = t.domain.ambient_dim();
  const Eigen::Index m = t.codomain_dim;
  const SubspaceMap& theta = analysis.theta;

  CMat e11 = theta.apply(matrix_unit(n, 0, 0));
  HermEig eig = herm_eig(CMat(0.5 * (e11 + e11.adjoint())));
  if (std::abs(eig.values(m - 1) - 1.0) > 1e-6) {
    throw StructureFailure("block_form: θ(E11) has no unit eigenvalue");
  }
  CVec f = fix_phases(eig.vectors.col(m - 1));
  CMat r(m, n);
  for (Eigen::Index j = 0; j < n; ++j) r.col(j) = theta.apply(matrix_unit(n, 0, j)).adjoint() * f;
  if (op_norm(r.adjoint() * r - CMat::Identity(n, n)) > 1e-6) {
    throw StructureFailure("block_form: the multiplicative part is not an n-dimensional block");
  }
  CMat l = analysis.u * r;
  CMat lp = fix_phases(orthogonal_complement(l, m));
  CMat rp = fix_phases(orthogonal_complement(r, m));
  if (lp.cols() != m - n || rp.cols() != m - n) throw StructureFailure("block_form: complement has wrong rank");

  BlockForm out;
  out.u.resize(m, m);
  out.u << l, lp;
  CMat vt(m, m);
  vt << r, rp;
  out.v = vt.adjoint();
  out.s = SubspaceMap::from_function(t.domain, m - n, [&](const CMat& a) { return CMat(lp.adjoint() * t.apply(a) * rp); });
  for (Eigen::Index i = 0; i < t.domain.dim(); ++i) {
    const CMat& a = t.domain.basis_element(i);
    CMat mid = CMat::Zero(m, m);
    mid.topLeftCorner(n, n) = a;
    mid.bottomRightCorner(m - n, m - n) = out.s.images[static_cast<std::size_t>(i)];
    out.residual = std::max(out.residual, op_norm(t.images[static_cast<std::size_t>(i)] - out.u * mid * out.v) /
                                              std::max(op_norm(a), 1e-300));
  }
  require(out.residual, tol.cert_tol, "block_form: U diag(A, S(A)) V does not reproduce T");
  return out;
}

BlockForm block_form_T_n(const SubspaceMap& t, const Context& ctx) {
  const Eigen::Index n = t.domain.ambient_dim();
  if (!same_subspace(t.domain, upper_triangular(n), ctx.tol)) {
    throw InvalidInput("block_form_T_n: domain is not the upper triangular algebra");
  }
  if (t.codomain_dim < n) throw InvalidInput("block_form_T_n: codomain is smaller than the domain");
  IsometryAnalysis a = analyze(t, ctx);
  if (!a.verdict.certified()) {
    throw InvalidInput("block_form_T_n: map is not certified completely isometric (" + to_string(a.verdict.verdict) +
                       ")");
  }
  return *a.block_form;
}

Type1Report type1_consequences(const SubspaceMap& t, const IsometryAnalysis& analysis, const Context& ctx) {
  Type1Report out;
  if (!analysis.verdict.certified() || !analysis.flags.left_type1) {
    out.notes.push_back("map is not a certified left type 1 complete isometry");
    return out;
  }
  out.applicable = true;
  const Tolerance& tol = ctx.tol;
  const Eigen::Index d = t.domain.ambient_dim();
  const Eigen::Index e = t.codomain_dim;
  const CMat t1 = t.apply(CMat::Identity(d, d));
  const double scale = image_scale(t);
  const auto& basis = t.domain.basis();

  double commute = 0.0;
  for (const auto& img : t.images) commute = std::max(commute, op_norm(t1 * img - img * t1));
  if (commute <= tol.cert_tol * scale * scale) {
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        worst = std::max(worst, op_norm(t1 * t.apply(basis[i] * basis[j]) - t.images[i] * t.images[j]));
      }
    }
    out.commuting_identity = worst;
  } else {
    out.notes.push_back("T(1) does not commute with the range; T(1) T(ab) = T(a) T(b) not applicable");
  }

  double factor = 0.0;
  for (const auto& img : t.images) factor = std::max(factor, op_norm(img - t1 * t1.adjoint() * img));
  out.factor_residual = factor;

  if (contains(t.range(tol), CMat::Identity(e, e), tol)) {
    out.coisometry_residual = op_norm(t1 * t1.adjoint() - CMat::Identity(e, e));
  }
  if (t.unital) out.homomorphism_residual = multiplicativity_defect(t);

  // Best K over a finite grid of vectors, with the sup over the unit ball
  // taken over normalized basis elements and random combinations.
  Rng rng(derive_seed(ctx.seed, "type1/bound"));
  std::vector<CMat> ball;
  if (contains(t.domain, CMat::Identity(d, d), tol)) ball.push_back(t1);
  for (const auto& b : basis) ball.push_back(t.apply(b) / op_norm(b));
  for (int s = 0; s < 64; ++s) {
    CMat a = t.domain.combine(random_gaussian(t.domain.dim(), 1, rng).col(0));
    double na = op_norm(a);
    if (na > 0.0) ball.push_back(t.apply(a) / na);
  }
  std::vector<CVec> grid;
  for (Eigen::Index i = 0; i < e; ++i) grid.push_back(CVec::Unit(e, i));
  for (int s = 0; s < 64; ++s) {
    CVec z = random_gaussian(e, 1, rng).col(0);
    grid.push_back(z / z.norm());
  }
  double k = 0.0;
  for (const auto& z : grid) {
    double best = 0.0;
    for (const auto& ta : ball) best = std::max(best, (ta * z).norm());
    k = std::max(k, best > 0.0 ? 1.0 / best : std::numeric_limits<double>::infinity());
  }
  out.bound_k = k;
  Svd s = svd(t1);
  out.t1_invertible = s.s.size() > 0 && s.s(s.s.size() - 1) > tol.cert_tol;
  if (std::isfinite(k) && out.commuting_identity && !out.t1_invertible) {
    out.notes.push_back("finite K with commuting T(1) but T(1) is singular");
  }
  return out;
}

SurjectiveDecomposition surjective_decompose(const SubspaceMap& t, const Subspace& b, const Tolerance& tol) {
  const Eigen::Index d = t.domain.ambient_dim();
  const Eigen::Index e = t.codomain_dim;
  if (b.ambient_dim() != e) throw InvalidInput("surjective_decompose: codomain dimension mismatch");
  if (!contains(t.domain, CMat::Identity(d, d), tol)) throw InvalidInput("surjective_decompose: domain is not unital");
  Subspace range = t.range(tol);
  if (range.dim() != b.dim() || !contains_all(b, range, tol)) {
    throw RangeNotOnto("surjective_decompose: range has dimension " + std::to_string(range.dim()) +
                       " but the target has dimension " + std::to_string(b.dim()));
  }
  SurjectiveDecomposition out;
  out.u = t.apply(CMat::Identity(d, d));
  out.unitary_residual = std::max(op_norm(out.u.adjoint() * out.u - CMat::Identity(e, e)),
                                  op_norm(out.u * out.u.adjoint() - CMat::Identity(e, e)));
  require(out.unitary_residual, tol.cert_tol, "surjective_decompose: T(1) is not unitary");
  if (!contains(b, out.u, tol) || !contains(b, CMat(out.u.adjoint()), tol)) {
    throw StructureFailure("surjective_decompose: T(1) is not in the diagonal of the target");
  }
  const CMat u = out.u;
  out.theta = SubspaceMap::from_function(t.domain, e, [&](const CMat& a) { return CMat(u.adjoint() * t.apply(a)); });
  out.multiplicative_residual = multiplicativity_defect(out.theta);
  require(out.multiplicative_residual, tol.cert_tol, "surjective_decompose: θ is not multiplicative");
  return out;
}

}  // namespace opalg
