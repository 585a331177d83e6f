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

#include "opalg/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace opalg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Thin SVD of a possibly tall matrix: QR first so the SVD runs on a square
// factor.
Svd thin_svd(const CMat& m) {
  if (m.rows() > 2 * m.cols() && m.cols() > 0) {
    Eigen::HouseholderQR<CMat> hqr(m);
    CMat r = hqr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<CMat> inner(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CMat q = hqr.householderQ() * CMat::Identity(m.rows(), m.cols());
    return {q * inner.matrixU(), inner.singularValues(), inner.matrixV()};
  }
  Eigen::JacobiSVD<CMat> s(m, Eigen::ComputeThinU | Eigen::ComputeFullV);
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return splitmix64(splitmix64(master) ^ splitmix64(tag + 0x51ed27));
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& tag) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return derive_seed(master, h);
}

double op_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> s(m);
  return s.singularValues()(0);
}

Complex hs_inner(const CMat& x, const CMat& y) {
  // trace(y* x) = sum conj(y_ij) x_ij
  return (y.conjugate().cwiseProduct(x)).sum();
}

double hs_norm(const CMat& m) { return m.norm(); }

bool is_hermitian(const CMat& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  double n = m.norm();
  return (m - m.adjoint()).norm() <= rel_tol * std::max(n, 1e-300);
}

HermEig herm_eig(const CMat& m) {
  if (m.rows() != m.cols()) throw InvalidInput("herm_eig: matrix is not square");
  const auto n = m.rows();
  double scale = m.norm();
  if (scale == 0.0) return {RVec::Zero(n), CMat::Identity(n, n)};
  CMat sym = 0.5 * (m + m.adjoint());
  if ((m - sym).norm() > 1e-6 * scale) {
    throw InvalidInput("herm_eig: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(sym);
  return {es.eigenvalues(), es.eigenvectors()};
}

double lambda_min(const CMat& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  CMat sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Svd svd(const CMat& m) {
  Eigen::JacobiSVD<CMat> s(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

Qr qr(const CMat& m) {
  Eigen::HouseholderQR<CMat> h(m);
  CMat q = h.householderQ();
  CMat r = h.matrixQR().triangularView<Eigen::Upper>();
  const auto k = std::min(r.rows(), r.cols());
  for (Eigen::Index i = 0; i < k; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    if (a == 0.0) continue;
    Complex phase = d / a;
    r.row(i) *= std::conj(phase);
    q.col(i) *= phase;
  }
  return {q, r};
}

CMat cholesky_upper(const CMat& p, const Tolerance& tol) {
  if (p.rows() != p.cols()) throw InvalidInput("cholesky: matrix is not square");
  HermEig e = herm_eig(p);
  if (e.values.size() == 0 || e.values(0) <= tol.cert_tol) {
    throw NotStrictlyPositive("cholesky: input is not strictly positive");
  }
  CMat sym = 0.5 * (p + p.adjoint());
  Eigen::LLT<CMat> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw NotStrictlyPositive("cholesky: factorization failed");
  }
  CMat l = llt.matrixL();
  return l.adjoint();
}

Polar polar(const CMat& m) {
  Svd s = svd(m);
  CMat u = s.u * s.v.adjoint();
  CMat mod = s.v * s.s.cast<Complex>().asDiagonal() * s.v.adjoint();
  return {u, 0.5 * (mod + mod.adjoint())};
}

CMat amplify(const std::vector<std::vector<CMat>>& blocks) {
  if (blocks.empty()) return CMat(0, 0);
  const auto k = blocks.size();
  const auto l = blocks.front().size();
  if (l == 0) throw InvalidInput("amplify: empty block row");
  const auto r = blocks[0][0].rows();
  const auto c = blocks[0][0].cols();
  for (const auto& row : blocks) {
    if (row.size() != l) throw InvalidInput("amplify: ragged block rows");
    for (const auto& b : row) {
      if (b.rows() != r || b.cols() != c) {
        throw InvalidInput("amplify: blocks differ in shape");
      }
    }
  }
  CMat out(static_cast<Eigen::Index>(k) * r, static_cast<Eigen::Index>(l) * c);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      out.block(static_cast<Eigen::Index>(i) * r, static_cast<Eigen::Index>(j) * c, r, c) =
          blocks[i][j];
    }
  }
  return out;
}

CMat psd_part(const CMat& hermitian) {
  CMat sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym);
  RVec v = es.eigenvalues().cwiseMax(0.0);
  const CMat& u = es.eigenvectors();
  return u * v.cast<Complex>().asDiagonal() * u.adjoint();
}

CMat psd_sqrt(const CMat& psd) {
  CMat sym = 0.5 * (psd + psd.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym);
  RVec v = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMat& u = es.eigenvectors();
  return u * v.cast<Complex>().asDiagonal() * u.adjoint();
}

CMat null_space(const CMat& m, double rel_tol) {
  const auto n = m.cols();
  if (n == 0) return CMat(0, 0);
  if (m.rows() == 0) return CMat::Identity(n, n);
  Svd s = thin_svd(m);
  double smax = s.s.size() > 0 ? s.s(0) : 0.0;
  double cut = rel_tol * std::max(smax, 1e-300);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.s.size(); ++i) {
    if (s.s(i) > cut) ++rank;
  }
  if (smax == 0.0) rank = 0;
  return s.v.rightCols(n - rank);
}

CMat column_space(const CMat& m, double rel_tol) {
  if (m.cols() == 0 || m.rows() == 0) return CMat(m.rows(), 0);
  Svd s = thin_svd(m);
  double smax = s.s(0);
  if (smax == 0.0) return CMat(m.rows(), 0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.s.size(); ++i) {
    if (s.s(i) > rel_tol * smax) ++rank;
  }
  return s.u.leftCols(rank);
}

CMat range_projection(const CMat& psd, double rel_tol) {
  const auto n = psd.rows();
  CMat sym = 0.5 * (psd + psd.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym);
  double top = es.eigenvalues().cwiseAbs().maxCoeff();
  CMat p = CMat::Zero(n, n);
  if (top == 0.0) return p;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (es.eigenvalues()(i) > rel_tol * top) {
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
  }
  return p;
}

CMat orthogonal_complement(const CMat& v, Eigen::Index n) {
  if (v.cols() == 0) return CMat::Identity(n, n);
  CMat proj = CMat::Identity(n, n) - v * v.adjoint();
  return column_space(proj, 1e-8);
}

CMat matrix_unit(Eigen::Index d, Eigen::Index i, Eigen::Index j) {
  CMat e = CMat::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

CMat random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = g(rng);
      double im = g(rng);
      m(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return m;
}

CMat random_unitary(Eigen::Index n, Rng& rng) {
  return qr(random_gaussian(n, n, rng)).q;
}

CMat random_hermitian(Eigen::Index n, Rng& rng) {
  CMat g = random_gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace opalg
