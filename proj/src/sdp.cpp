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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "opalg/linalg.hpp"
#include "opalg/positivity.hpp"

namespace opalg {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

RMat orthonormal_columns(const RMat& m, double rel_tol) {
  if (m.cols() == 0 || m.rows() == 0) return RMat(m.rows(), 0);
  Eigen::JacobiSVD<RMat> s(m, Eigen::ComputeThinU);
  const RVec& sv = s.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return RMat(m.rows(), 0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > rel_tol * sv(0)) ++r;
  return s.matrixU().leftCols(r);
}

struct Eig {
  RVec values;
  CMat vectors;
};

Eig eig(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h + h.adjoint()));
  return {es.eigenvalues(), es.eigenvectors()};
}

CMat psd_from(const Eig& e) {
  RVec v = e.values.cwiseMax(0.0);
  return e.vectors * v.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

// Alternating projections between the affine set and the cone of PSD
// matrices supported on range(v). Inside the right face the intersection is
// usually transversal, so this converges quickly where the full iteration
// crawls.
bool acceptable(const AffineConstraint& affine, const CMat& cand, const Tolerance& tol, double scale) {
  double aff = (affine.project(cand) - cand).norm();
  return aff <= tol.cert_tol * scale && lambda_min(cand) >= -tol.cert_tol * scale;
}

// Gauss-Newton on the manifold of rank-r PSD matrices. Each step solves,
// by CGLS, for the least-norm tangent move V A V* + V Z* + Z V* that lands
// on the affine set, then retracts to the top r eigenpairs. The normal-space
// map X -> X - P(X) + P(0) is a self-adjoint projection and serves as its
// own adjoint.
std::optional<CMat> rank_newton(const AffineConstraint& affine, const CMat& start, Eigen::Index r,
                                const Tolerance& tol, double scale) {
  const Eigen::Index n = start.rows();
  const CMat p0 = affine.project(CMat::Zero(n, n));
  auto normal = [&](const CMat& x) {
    CMat m = x - affine.project(x) + p0;
    return CMat(0.5 * (m + m.adjoint()));
  };
  auto herm = [](const CMat& m) { return CMat(0.5 * (m + m.adjoint())); };

  Eig e0 = eig(start);
  CMat v = e0.vectors.rightCols(r);
  CMat x = v * e0.values.tail(r).cwiseMax(0.0).cast<Complex>().asDiagonal() * v.adjoint();
  double last_gap = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 12; ++step) {
    auto tangent = [&](const CMat& a, const CMat& z) {
      return CMat(v * a * v.adjoint() + v * z.adjoint() + z * v.adjoint());
    };
    CMat res = p0 - normal(x);
    CMat a = CMat::Zero(r, r);
    CMat z = CMat::Zero(n, r);
    CMat nr = normal(res);
    CMat sa = herm(v.adjoint() * nr * v);
    CMat sz = 2.0 * nr * v;
    CMat da = sa, dz = sz;
    double gamma = sa.squaredNorm() + sz.squaredNorm();
    // Inexact Newton: solve the tangent system to a relative 1e-6, which
    // keeps quadratic-like progress at a fraction of the CGLS iterations.
    const double stop = std::max(1e-28 * std::max(1.0, p0.squaredNorm()), 1e-12 * gamma);
    for (int it = 0; it < 300 && gamma > stop; ++it) {
      CMat q = normal(tangent(da, dz));
      double qq = q.squaredNorm();
      if (qq == 0.0) break;
      double alpha = gamma / qq;
      a += alpha * da;
      z += alpha * dz;
      res -= alpha * q;
      nr = normal(res);
      sa = herm(v.adjoint() * nr * v);
      sz = 2.0 * nr * v;
      double next = sa.squaredNorm() + sz.squaredNorm();
      da = sa + (next / gamma) * da;
      dz = sz + (next / gamma) * dz;
      gamma = next;
    }
    Eig e1 = eig(CMat(x + tangent(a, z)));
    v = e1.vectors.rightCols(r);
    x = v * e1.values.tail(r).cwiseMax(0.0).cast<Complex>().asDiagonal() * v.adjoint();
    CMat cand = affine.project(x);
    if (acceptable(affine, cand, tol, scale)) return cand;
    const double gap = (cand - x).norm();
    if (gap > 10.0 * scale) return std::nullopt;
    // Newton steps on the right face shrink the gap fast; a slow decrease
    // means the rank guess is wrong.
    if (step >= 2 && gap > 0.1 * last_gap) return std::nullopt;
    last_gap = gap;
  }
  return std::nullopt;
}

std::optional<CMat> polish_face(const AffineConstraint& affine, const CMat& v, const CMat& start,
                                const Tolerance& tol, double scale) {
  if (auto c = rank_newton(affine, start, v.cols(), tol, scale)) return c;
  CMat x = start;
  for (int it = 0; it < 300; ++it) {
    CMat y = affine.project(x);
    CMat z = v.adjoint() * y * v;
    Eig ez = eig(z);
    x = v * psd_from(ez) * v.adjoint();
    if (it % 25 == 24 || it == 299) {
      CMat cand = affine.project(x);
      if (acceptable(affine, cand, tol, scale)) return cand;
    }
  }
  return std::nullopt;
}

}  // namespace

RVec herm_to_real(const CMat& h) {
  const Eigen::Index n = h.rows();
  RVec x(n * n);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < n; ++i) x(t++) = h(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Complex z = 0.5 * (h(i, j) + std::conj(h(j, i)));
      x(t++) = kSqrt2 * z.real();
      x(t++) = kSqrt2 * z.imag();
    }
  }
  return x;
}

CMat real_to_herm(const RVec& x, Eigen::Index n) {
  CMat h = CMat::Zero(n, n);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = x(t++);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Complex z(x(t), x(t + 1));
      t += 2;
      h(i, j) = z / kSqrt2;
      h(j, i) = std::conj(z) / kSqrt2;
    }
  }
  return h;
}

LinearEqualities::LinearEqualities(Eigen::Index n, const std::vector<CMat>& a,
                                   const std::vector<Complex>& b)
    : n_(n) {
  if (a.size() != b.size()) throw InvalidInput("LinearEqualities: size mismatch");
  const auto m = static_cast<Eigen::Index>(a.size());
  RMat rows(2 * m, n * n);
  RVec rhs(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const CMat& ai = a[static_cast<std::size_t>(i)];
    if (ai.rows() != n || ai.cols() != n) throw InvalidInput("LinearEqualities: shape mismatch");
    // trace(A* X) = trace(H X) - i trace(K X) with A = H + iK.
    CMat h = 0.5 * (ai + ai.adjoint());
    CMat k = (ai - ai.adjoint()) / Complex(0.0, 2.0);
    rows.row(2 * i) = herm_to_real(h).transpose();
    rows.row(2 * i + 1) = -herm_to_real(k).transpose();
    rhs(2 * i) = b[static_cast<std::size_t>(i)].real();
    rhs(2 * i + 1) = b[static_cast<std::size_t>(i)].imag();
  }
  // Keep only the numerically independent constraints.
  Eigen::JacobiSVD<RMat> s(rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& sv = s.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(0) > 0 && sv(r) > 1e-12 * sv(0)) ++r;
  normals_ = s.matrixV().leftCols(r);
  offset_ = (s.matrixU().leftCols(r).transpose() * rhs).cwiseQuotient(sv.head(r));
}

CMat LinearEqualities::project(const CMat& x) const {
  RVec v = herm_to_real(x);
  v -= normals_ * (normals_.transpose() * v - offset_);
  return real_to_herm(v, n_);
}

CVec LinearEqualities::defect(const CMat& x) const {
  RVec v = normals_.transpose() * herm_to_real(x) - offset_;
  return v.cast<Complex>();
}

AffineSpan::AffineSpan(const CMat& offset, const std::vector<CMat>& directions)
    : n_(offset.rows()), offset_(herm_to_real(offset)) {
  RMat dirs(n_ * n_, static_cast<Eigen::Index>(directions.size()));
  for (std::size_t i = 0; i < directions.size(); ++i) {
    dirs.col(static_cast<Eigen::Index>(i)) = herm_to_real(directions[i]);
  }
  basis_ = orthonormal_columns(dirs, 1e-12);
}

CMat AffineSpan::project(const CMat& x) const {
  RVec v = herm_to_real(x) - offset_;
  RVec p = offset_ + basis_ * (basis_.transpose() * v);
  return real_to_herm(p, n_);
}

CVec AffineSpan::defect(const CMat& x) const {
  RVec v = herm_to_real(x) - offset_;
  RVec r = v - basis_ * (basis_.transpose() * v);
  return r.cast<Complex>();
}

ChoiConstraint::ChoiConstraint(const SubspaceMap& t) : d_(t.domain.ambient_dim()), e_(t.codomain_dim) {
  const Eigen::Index k = t.domain.dim();
  p_.resize(d_ * d_, k);
  target_.resize(k, e_ * e_);
  for (Eigen::Index l = 0; l < k; ++l) {
    const CMat& s = t.domain.basis_element(l);
    const CMat& img = t.images[static_cast<std::size_t>(l)];
    for (Eigen::Index i = 0; i < d_; ++i) {
      for (Eigen::Index j = 0; j < d_; ++j) p_(i * d_ + j, l) = std::conj(s(i, j));
    }
    for (Eigen::Index p = 0; p < e_; ++p) {
      for (Eigen::Index q = 0; q < e_; ++q) target_(l, p * e_ + q) = img(p, q);
    }
  }
}

CMat ChoiConstraint::reshuffle(const CMat& c) const {
  CMat r(d_ * d_, e_ * e_);
  for (Eigen::Index i = 0; i < d_; ++i) {
    for (Eigen::Index j = 0; j < d_; ++j) {
      for (Eigen::Index p = 0; p < e_; ++p) {
        for (Eigen::Index q = 0; q < e_; ++q) r(i * d_ + j, p * e_ + q) = c(i * e_ + p, j * e_ + q);
      }
    }
  }
  return r;
}

CMat ChoiConstraint::unshuffle(const CMat& r) const {
  CMat c(d_ * e_, d_ * e_);
  for (Eigen::Index i = 0; i < d_; ++i) {
    for (Eigen::Index j = 0; j < d_; ++j) {
      for (Eigen::Index p = 0; p < e_; ++p) {
        for (Eigen::Index q = 0; q < e_; ++q) c(i * e_ + p, j * e_ + q) = r(i * d_ + j, p * e_ + q);
      }
    }
  }
  return c;
}

CMat ChoiConstraint::project(const CMat& c) const {
  CMat r = reshuffle(c);
  r -= p_ * (p_.adjoint() * r - target_);
  CMat out = unshuffle(r);
  return 0.5 * (out + out.adjoint());
}

CVec ChoiConstraint::defect(const CMat& c) const {
  CMat d = p_.adjoint() * reshuffle(c) - target_;
  return Eigen::Map<const CVec>(d.data(), d.size());
}

SdpResult sdp_solve(const AffineConstraint& affine, const Tolerance& tol) {
  const Eigen::Index n = affine.size();
  SdpResult res;
  const CMat id = CMat::Identity(n, n);
  CMat base = affine.project(CMat::Zero(n, n));
  const double scale = std::max(1.0, base.norm() / std::sqrt(static_cast<double>(n)));
  // Starting from a multiple of the identity steers the iterates toward the
  // interior of the feasible set when one exists.
  CMat x = scale * id;
  CMat corr = CMat::Zero(n, n);
  double best = std::numeric_limits<double>::infinity();
  CMat best_point = base;
  double last_window_gap = std::numeric_limits<double>::infinity();
  int it = 0;
  CMat y = base;
  // Ranks whose face polish failed recently.
  std::set<Eigen::Index> failed_ranks;

  auto accept = [&](const CMat& cand) {
    double aff = (affine.project(cand) - cand).norm();
    double lmin = lambda_min(cand);
    double r = std::max(aff, std::max(0.0, -lmin) / scale);
    if (r < best) {
      best = r;
      best_point = cand;
    }
    return aff <= tol.cert_tol * scale && lmin >= -tol.cert_tol * scale;
  };

  for (it = 1; it <= tol.iter_cap; ++it) {
    y = affine.project(x);
    CMat z = y + corr;
    Eig ez = eig(z);
    x = psd_from(ez);
    corr = z - x;

    if (it % 10 == 0 || it == 1) {
      if (accept(y)) {
        res.cert = Certificate::make(Verdict::Certified);
        res.cert.object = best_point;
        res.cert.residual = best;
        res.cert.iterations = it;
        res.point = best_point;
        res.gap = x - y;
        return res;
      }
    }
    if (it % 100 == 0) {
      Eig ex = eig(x);
      const double top = ex.values(n - 1);
      Eigen::Index prev = -1;
      if (it % 500 == 0) failed_ranks.clear();
      for (double rel : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (ex.values(i) > rel * top) ++r;
        }
        if (r == prev || r == 0 || r == n || failed_ranks.count(r)) continue;
        prev = r;
        failed_ranks.insert(r);
        CMat v = ex.vectors.rightCols(r);
        if (auto cand = polish_face(affine, v, x, tol, scale)) {
          if (accept(*cand)) {
            res.cert = Certificate::make(Verdict::Certified, "face polish");
            res.cert.object = best_point;
            res.cert.residual = best;
            res.cert.iterations = it;
            res.point = best_point;
            res.gap = x - affine.project(x);
            return res;
          }
        }
      }
    }
    if (it % 1000 == 0) {
      // A gap that stops shrinking signals an (apparently) empty
      // intersection; alternating projections cannot prove it.
      double gap = (x - y).norm() / scale;
      if (it >= 3000 && gap > 1e-4 && gap > 0.98 * last_window_gap) break;
      last_window_gap = gap;
    }
  }
  res.cert = Certificate::make(Verdict::Inconclusive, it > tol.iter_cap ? "iteration cap reached"
                                                                         : "stalled");
  res.cert.residual = best;
  res.cert.iterations = std::min(it, tol.iter_cap);
  res.point = best_point;
  res.gap = x - affine.project(x);
  return res;
}

Certificate sdp_feasible(const AffineConstraint& affine, const Tolerance& tol) {
  return sdp_solve(affine, tol).cert;
}

}  // namespace opalg
