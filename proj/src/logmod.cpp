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

#include "opalg/logmod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opalg/envelope.hpp"
#include "opalg/linalg.hpp"
#include "opalg/structure.hpp"

namespace opalg {

namespace {

constexpr int kWishartSamples = 25;
constexpr int kFactorSamples = 20;

std::vector<CMat> products(const Subspace& a, Side side) {
  std::vector<CMat> out;
  for (const auto& ei : a.basis()) {
    for (const auto& ej : a.basis()) {
      out.push_back(side == Side::Left ? CMat(ei.adjoint() * ej) : CMat(ei * ej.adjoint()));
    }
  }
  return out;
}

// G(Y)_ij = tr(Y p_ij) for the product list p of a k-dimensional basis.
CMat gram_functional(const std::vector<CMat>& p, Eigen::Index k, const CMat& y) {
  CMat g(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) g(i, j) = (y * p[static_cast<std::size_t>(i * k + j)]).trace();
  }
  return g;
}

std::vector<CMat> hermitian_basis(Eigen::Index d) {
  std::vector<CMat> out;
  for (Eigen::Index i = 0; i < d; ++i) out.push_back(matrix_unit(d, i, i));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      out.push_back((matrix_unit(d, i, j) + matrix_unit(d, j, i)) / std::sqrt(2.0));
      out.push_back(Complex(0, 1) * (matrix_unit(d, i, j) - matrix_unit(d, j, i)) / std::sqrt(2.0));
    }
  }
  return out;
}

Certificate separating(const CMat& y, double value, std::string note) {
  Certificate c = Certificate::make(Verdict::Refuted, std::move(note));
  c.witness_kind = WitnessKind::Separating;
  c.witness = {y};
  c.level = 1;
  c.residual = value;
  return c;
}

// Positive semidefinite test set of B: rank-one matrix-unit combinations in
// each Wedderburn block plus random Wishart elements.
std::vector<CMat> psd_test_set(const Subspace& b, const BlockStructure& bs, Rng& rng) {
  std::vector<CMat> out;
  for (int k = 0; k < bs.num_blocks; ++k) {
    const Eigen::Index n = bs.block_dims[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < n; ++i) {
      CVec v = CVec::Unit(n, i);
      out.push_back(bs.embed(k, v * v.adjoint()));
      for (Eigen::Index j = i + 1; j < n; ++j) {
        for (Complex ph : {Complex(1, 0), Complex(0, 1)}) {
          CVec w = CVec::Unit(n, i) + ph * CVec::Unit(n, j);
          out.push_back(bs.embed(k, w * w.adjoint()));
        }
      }
    }
  }
  for (int s = 0; s < kWishartSamples; ++s) {
    CMat x = b.combine(random_gaussian(b.dim(), 1, rng).col(0));
    CMat w = x.adjoint() * x;
    out.push_back(w / op_norm(w));
  }
  return out;
}

CMat random_strictly_positive(const Subspace& b, Rng& rng) {
  const Eigen::Index d = b.ambient_dim();
  CMat x = b.combine(random_gaussian(b.dim(), 1, rng).col(0));
  CMat p = x.adjoint() * x;
  return p / op_norm(p) + 0.05 * CMat::Identity(d, d);
}

bool factor_ok(const Factorization& f, const Tolerance& tol) {
  return f.residual <= tol.cert_tol && f.membership <= tol.cert_tol && f.inverse_membership <= tol.cert_tol;
}

}  // namespace

std::string to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::optional<NestPattern> find_nest(const Subspace& a, const Tolerance& tol) {
  const Eigen::Index d = a.ambient_dim();
  if (d == 0 || !check_unital(a, tol) || !check_algebra(a, tol)) return std::nullopt;
  Subspace diag = diag_part(a, tol);
  BlockStructure bs;
  try {
    Context ctx;
    ctx.tol = tol;
    bs = wedderburn(diag, ctx);
  } catch (const Error&) {
    return std::nullopt;
  }
  const int r = bs.num_blocks;
  for (int m : bs.multiplicities) {
    if (m != 1) return std::nullopt;
  }
  // In a nest algebra q_i A q_j is nonzero exactly when block i precedes j.
  std::vector<std::vector<bool>> linked(static_cast<std::size_t>(r), std::vector<bool>(static_cast<std::size_t>(r)));
  std::vector<int> reach(static_cast<std::size_t>(r), 0);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const auto& qi = bs.central_projections[static_cast<std::size_t>(i)];
      const auto& qj = bs.central_projections[static_cast<std::size_t>(j)];
      bool hit = false;
      for (const auto& x : a.basis()) hit = hit || (qi * x * qj).norm() > tol.cert_tol;
      linked[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = hit;
      if (hit) ++reach[static_cast<std::size_t>(i)];
    }
  }
  std::vector<int> order(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return reach[static_cast<std::size_t>(x)] > reach[static_cast<std::size_t>(y)];
  });
  for (int p = 0; p < r; ++p) {
    for (int q = 0; q < r; ++q) {
      bool want = p <= q;
      if (linked[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])]
                [static_cast<std::size_t>(order[static_cast<std::size_t>(q)])] != want) {
        return std::nullopt;
      }
    }
  }
  NestPattern nest;
  nest.unitary = CMat(d, d);
  Eigen::Index col = 0;
  for (int k : order) {
    const CMat& v = bs.block_isometries[static_cast<std::size_t>(k)];
    nest.unitary.middleCols(col, v.cols()) = v;
    col += v.cols();
    nest.block_sizes.push_back(static_cast<int>(v.cols()));
  }
  if (col != d) return std::nullopt;
  Subspace model = conjugate(block_upper_triangular(nest.block_sizes), nest.unitary, tol);
  if (model.dim() != a.dim() || !contains_all(a, model, tol)) return std::nullopt;
  return nest;
}

Factorization factorize(const Subspace& a, const CMat& b, const Tolerance& tol) {
  const Eigen::Index d = a.ambient_dim();
  if (b.rows() != d || b.cols() != d) throw InvalidInput("factorize: shape mismatch");
  if (!is_hermitian(b, 1e-10)) throw InvalidInput("factorize: b is not Hermitian");
  CMat w;
  if (a.nest) {
    w = a.nest->unitary;
  } else if (detect_nest(a, tol)) {
    w = CMat::Identity(d, d);
  } else if (auto nest = find_nest(a, tol)) {
    w = nest->unitary;
  } else {
    throw UnsupportedAlgebra("factorize: no nest pattern is known for this algebra");
  }
  // With A = W N W* for a block upper triangular N, the Cholesky factor of
  // W* b W is upper triangular and so lies in N together with its inverse.
  CMat r = cholesky_upper(CMat(w.adjoint() * b * w), tol);
  Factorization f;
  f.a = w * r * w.adjoint();
  const double nb = op_norm(b);
  f.residual = op_norm(f.a.adjoint() * f.a - b) / nb;
  f.membership = a.distance(f.a) / std::max(1.0, f.a.norm());
  CMat inv = f.a.inverse();
  f.inverse_membership = a.distance(inv) / std::max(1.0, inv.norm());
  return f;
}

FactorForms factor_forms(const Subspace& a, const CMat& b, const Tolerance& tol) {
  const Eigen::Index d = a.ambient_dim();
  if (b.rows() != d || b.cols() != d) throw InvalidInput("factor_forms: shape mismatch");
  Svd s = svd(b);
  if (s.s(d - 1) <= tol.cert_tol * std::max(1.0, s.s(0))) throw DegenerateInput("factor_forms: b is not invertible");
  Polar p = polar(b);
  Factorization f = factorize(a, CMat(b.adjoint() * b), tol);
  FactorForms out;
  out.polar_u = p.unitary;
  out.a = f.a;
  out.u = b * f.a.inverse();
  // Snap u to the nearest unitary; b* b = a* a makes b a^{-1} unitary.
  out.u = polar(out.u).unitary;
  const double nb = op_norm(b);
  out.modulus_residual = op_norm(b - out.polar_u * psd_sqrt(CMat(f.a.adjoint() * f.a))) / nb;
  out.product_residual = op_norm(b - out.u * out.a) / nb;
  return out;
}

Certificate cone_membership(const Subspace& a, const CMat& x, Side side, const Tolerance& tol) {
  const Eigen::Index d = a.ambient_dim();
  const Eigen::Index k = a.dim();
  if (x.rows() != d || x.cols() != d) throw InvalidInput("cone_membership: shape mismatch");
  if (!is_hermitian(x, 1e-10)) throw InvalidInput("cone_membership: X is not Hermitian");
  const double nx = op_norm(x);
  if (lambda_min(x) < -tol.cert_tol * std::max(1.0, nx)) throw InvalidInput("cone_membership: X is not positive");
  if (nx == 0.0) {
    Certificate c = Certificate::make(Verdict::Certified, "zero is in every cone");
    c.object = CMat::Zero(k, k);
    return c;
  }

  const std::vector<CMat> p = products(a, side);
  Subspace span = span_of(p, d, tol);
  CMat outside = x - span.project(x);
  outside = (0.5 * (outside + outside.adjoint())).eval();
  if (outside.norm() > tol.cert_tol * std::max(1.0, x.norm())) {
    // Y = -(X - proj X) vanishes on every product and pairs negatively with X.
    CMat y = -outside / outside.norm();
    return separating(y, (y * x).trace().real(), "X is outside the span of the products");
  }

  std::vector<CMat> rows;
  std::vector<Complex> rhs;
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index s = 0; s < d; ++s) {
      CMat m(k, k);
      for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = std::conj(p[static_cast<std::size_t>(i * k + j)](r, s));
      }
      rows.push_back(m);
      rhs.push_back(x(r, s));
    }
  }
  SdpResult gram = sdp_solve(LinearEqualities(k, rows, rhs), tol);
  if (gram.cert.certified()) {
    Certificate c = Certificate::make(Verdict::Certified, "Gram matrix over the basis of A");
    c.object = gram.cert.object;
    c.iterations = gram.cert.iterations;
    c.residual = verify_cone_certificate(a, x, side, c, tol);
    return c;
  }

  // Separating functional: Z = G(Y) >= 0 with tr(Y X) = -1, searched over
  // the affine family of Gram images.
  const CMat y0 = -x / x.squaredNorm();
  std::vector<CMat> dirs;
  std::vector<CMat> images;
  for (const auto& h : hermitian_basis(d)) {
    CMat hd = h - ((h * x).trace().real() / x.squaredNorm()) * x;
    dirs.push_back(hd);
    images.push_back(gram_functional(p, k, hd));
  }
  const CMat g0 = gram_functional(p, k, y0);
  SdpResult sep = sdp_solve(AffineSpan(g0, images), tol);
  if (sep.cert.certified()) {
    RMat m(k * k, static_cast<Eigen::Index>(images.size()));
    for (std::size_t l = 0; l < images.size(); ++l) m.col(static_cast<Eigen::Index>(l)) = herm_to_real(images[l]);
    RVec t = m.completeOrthogonalDecomposition().solve(RVec(herm_to_real(sep.cert.object) - herm_to_real(g0)));
    CMat y = y0;
    for (std::size_t l = 0; l < dirs.size(); ++l) y += t(static_cast<Eigen::Index>(l)) * dirs[l];
    y = (0.5 * (y + y.adjoint())).eval();
    y /= y.norm();
    Certificate c = separating(y, (y * x).trace().real(), "separating functional nonnegative on the cone");
    c.iterations = gram.cert.iterations + sep.cert.iterations;
    if (verify_cone_certificate(a, x, side, c, tol) == 0.0) return c;
  }
  Certificate c = Certificate::make(Verdict::Inconclusive, "neither a Gram matrix nor a separating functional found");
  c.residual = gram.cert.residual;
  c.iterations = gram.cert.iterations + sep.cert.iterations;
  return c;
}

double verify_cone_certificate(const Subspace& a, const CMat& x, Side side, const Certificate& c,
                               const Tolerance& tol) {
  const Eigen::Index k = a.dim();
  const std::vector<CMat> p = products(a, side);
  if (c.certified()) {
    const CMat& g = c.object;
    if (g.rows() != k || g.cols() != k) return std::numeric_limits<double>::infinity();
    CMat sum = CMat::Zero(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) sum += g(i, j) * p[static_cast<std::size_t>(i * k + j)];
    }
    double res = op_norm(sum - x);
    return std::max(res, std::max(0.0, -lambda_min(g)));
  }
  if (c.refuted()) {
    if (c.witness.empty()) return std::numeric_limits<double>::infinity();
    const CMat& y = c.witness[0];
    double pairing = (y * x).trace().real();
    double lo = lambda_min(gram_functional(p, k, y));
    // tr(Y X) must be clearly negative while G(Y) stays PSD.
    double bad = std::max(0.0, -lo - tol.cert_tol);
    if (pairing >= -tol.cert_tol) bad = std::max(bad, pairing + tol.cert_tol);
    return bad;
  }
  return 0.0;
}

LadderReport classify_ladder(const Subspace& a, const Subspace& b, const Context& ctx) {
  const Tolerance& tol = ctx.tol;
  const Eigen::Index d = a.ambient_dim();
  if (b.ambient_dim() != d) throw InvalidInput("classify_ladder: ambient dimensions differ");
  if (!contains(a, CMat::Identity(d, d), tol)) throw InvalidInput("classify_ladder: A is not unital");
  if (!check_algebra(a, tol)) throw InvalidInput("classify_ladder: A is not an algebra");
  if (!check_selfadjoint(b, tol) || !check_algebra(b, tol)) {
    throw InvalidInput("classify_ladder: B is not a *-algebra");
  }
  LadderReport rep;
  rep.dirichlet = Certificate::make(is_dirichlet(a, b, tol) ? Verdict::Certified : Verdict::Refuted,
                                    "span(A + A*) compared with B");

  Rng rng(derive_seed(ctx.seed, "ladder"));
  // Factorization is decided constructively when A has a nest pattern.
  try {
    bool ok = true;
    for (int s = 0; s < kFactorSamples; ++s) {
      Factorization f = factorize(a, random_strictly_positive(b, rng), tol);
      rep.worst_factor_residual = std::max({rep.worst_factor_residual, f.residual, f.membership, f.inverse_membership});
      ++rep.factor_samples;
      ok = ok && factor_ok(f, tol);
    }
    rep.factorization = ok ? Certificate::make(Verdict::Certified, "nest-type algebra: Cholesky factorization")
                           : Certificate::make(Verdict::Inconclusive, "constructive factorization lost accuracy");
  } catch (const UnsupportedAlgebra&) {
    rep.factorization = Certificate::make(Verdict::Inconclusive, "no constructive factorization known");
  }

  BlockStructure bs = wedderburn(b, ctx);
  std::vector<CMat> tests = psd_test_set(b, bs, rng);
  for (Side side : {Side::Left, Side::Right}) {
    Certificate& rung = side == Side::Left ? rep.conv_approx_left : rep.conv_approx_right;
    rung = Certificate::make(Verdict::Certified, "every sampled positive element is in the cone");
    for (const auto& x : tests) {
      Certificate c = cone_membership(a, x, side, tol);
      ++rep.cone_samples;
      if (c.refuted()) {
        rung = c;
        rung.note = "sampled positive element outside the cone: " + c.note;
        break;
      }
      if (c.inconclusive()) rung = Certificate::make(Verdict::Inconclusive, "cone test inconclusive on a sample");
    }
  }

  if (rep.conv_approx_left.certified() || rep.conv_approx_right.certified()) {
    EnvelopeResult env = cstar_envelope(a, ctx);
    rep.envelope_full = env.shilov_blocks.empty() && same_subspace(env.generated_algebra, b, tol);
    if (!*rep.envelope_full) {
      rep.notes.push_back("B is not the C*-envelope of A, so convex approximation in modulus fails");
      for (Certificate* c : {&rep.conv_approx_left, &rep.conv_approx_right}) {
        if (c->certified()) *c = Certificate::make(Verdict::Refuted, "B is not the C*-envelope of A");
      }
    }
  }

  const bool conv_refuted = rep.conv_approx_left.refuted() || rep.conv_approx_right.refuted();
  if (rep.factorization.certified()) {
    if (conv_refuted) throw StructureFailure("classify_ladder: factorization certified but convex approximation refuted");
    rep.logmodular = Certificate::make(Verdict::Certified, "implied by factorization");
    rep.logrigged = Certificate::make(Verdict::Certified, "implied by factorization");
  } else if (conv_refuted) {
    const char* why = "implied: convex approximation in modulus fails";
    rep.factorization = Certificate::make(Verdict::Refuted, why);
    rep.logmodular = Certificate::make(Verdict::Refuted, why);
    rep.logrigged = Certificate::make(Verdict::Refuted, why);
  } else {
    rep.logmodular = Certificate::make(Verdict::Inconclusive, "no finite-dimensional decision procedure");
    rep.logrigged = Certificate::make(Verdict::Inconclusive, "no finite-dimensional decision procedure");
  }

  // No lower rung may be refuted while a higher one is certified.
  const Certificate* order[] = {&rep.factorization, &rep.logmodular, &rep.logrigged, &rep.conv_approx_left,
                                &rep.conv_approx_right};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      if (order[i]->certified() && order[j]->refuted()) {
        throw StructureFailure("classify_ladder: rung order violated");
      }
    }
  }
  return rep;
}

SimilarityReport similarity_transport(const Subspace& a, const CMat& x, const Context& ctx) {
  const Tolerance& tol = ctx.tol;
  const Eigen::Index d = a.ambient_dim();
  FactorForms forms = factor_forms(a, x, tol);
  SimilarityReport rep;
  rep.u = forms.u;
  Subspace moved = similarity(a, x, tol);
  Subspace rotated = conjugate(a, rep.u, tol);
  rep.subspace_distance = subspace_distance(moved, rotated);

  Rng rng(derive_seed(ctx.seed, "similarity"));
  Subspace full = full_algebra(d);
  for (int s = 0; s < 10; ++s) {
    Factorization f = factorize(rotated, random_strictly_positive(full, rng), tol);
    rep.worst_factor_residual = std::max({rep.worst_factor_residual, f.residual, f.membership, f.inverse_membership});
    ++rep.factor_samples;
  }
  EnvelopeResult env = cstar_envelope(moved, ctx);
  rep.envelope_dims = env.envelope_dims;
  rep.envelope_full = env.shilov_blocks.empty() && env.generated_algebra.dim() == d * d;
  return rep;
}

}  // namespace opalg
