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

#include "opalg/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "opalg/linalg.hpp"

namespace opalg {

namespace {

struct Bottom {
  double value;
  CVec vector;
};

Bottom bottom_eig(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h + h.adjoint()));
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

std::vector<CMat> hermitian_spanning_set(const Subspace& s) {
  std::vector<CMat> out;
  for (const auto& b : s.basis()) {
    out.push_back(0.5 * (b + b.adjoint()));
    out.push_back((b - b.adjoint()) / Complex(0.0, 2.0));
  }
  return out;
}

// HS adjoint of T: Z -> Σ_l <Z, T(s_l)> s_l.
CMat map_adjoint(const SubspaceMap& t, const CMat& z) {
  const Eigen::Index d = t.domain.ambient_dim();
  CMat out = CMat::Zero(d, d);
  for (Eigen::Index l = 0; l < t.domain.dim(); ++l) {
    out += hs_inner(z, t.images[static_cast<std::size_t>(l)]) * t.domain.basis_element(l);
  }
  return out;
}

// Hermitian element of M_k(S) held as blocks; P = Y - λ_min(Y) I is the
// PSD element whose image is tested.
struct LevelProbe {
  int k;
  std::vector<CMat> y;
};

struct ProbeValue {
  double f;          // λ_min(T_k(P)) / ‖P‖
  double raw;        // λ_min(T_k(P))
  std::vector<CMat> p;
  CVec w, u;
  double shift;
};

ProbeValue evaluate(const SubspaceMap& t, const LevelProbe& probe, const CMat& t_one) {
  const int k = probe.k;
  const Eigen::Index d = t.domain.ambient_dim();
  CMat y = assemble_level(probe.y, k);
  Eigen::SelfAdjointEigenSolver<CMat> ey(0.5 * (y + y.adjoint()));
  const double lo = ey.eigenvalues()(0);
  const double hi = ey.eigenvalues()(ey.eigenvalues().size() - 1);
  ProbeValue v;
  v.u = ey.eigenvectors().col(0);
  v.shift = lo;
  v.p = probe.y;
  std::vector<CMat> images;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      CMat img = t.apply(probe.y[static_cast<std::size_t>(i * k + j)]);
      if (i == j) {
        img -= lo * t_one;
        v.p[static_cast<std::size_t>(i * k + j)] -= lo * CMat::Identity(d, d);
      }
      images.push_back(img);
    }
  }
  Bottom b = bottom_eig(assemble_level(images, k));
  v.w = b.vector;
  v.raw = b.value;
  double norm = std::max(hi - lo, 1e-300);
  v.f = b.value / norm;
  return v;
}

LevelProbe random_probe(const std::vector<CMat>& herm, const Subspace& s, int k, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const Eigen::Index d = s.ambient_dim();
  LevelProbe p{k, std::vector<CMat>(static_cast<std::size_t>(k * k), CMat::Zero(d, d))};
  for (int i = 0; i < k; ++i) {
    CMat h = CMat::Zero(d, d);
    for (const auto& x : herm) h += g(rng) * x;
    p.y[static_cast<std::size_t>(i * k + i)] = h;
    for (int j = i + 1; j < k; ++j) {
      CMat z = s.combine(random_gaussian(s.dim(), 1, rng));
      p.y[static_cast<std::size_t>(i * k + j)] = z;
      p.y[static_cast<std::size_t>(j * k + i)] = z.adjoint();
    }
  }
  return p;
}

void normalize(LevelProbe& p) {
  double n = 0.0;
  for (const auto& b : p.y) n += b.squaredNorm();
  n = std::sqrt(n);
  if (n > 0) {
    for (auto& b : p.y) b /= n;
  }
}

// Projected gradient descent on λ_min(T_k(Y - λ_min(Y))) / ‖·‖.
ProbeValue refine(const SubspaceMap& t, LevelProbe probe, const CMat& t_one, int steps) {
  const int k = probe.k;
  const Eigen::Index d = t.domain.ambient_dim();
  const Eigen::Index e = t.codomain_dim;
  normalize(probe);
  ProbeValue cur = evaluate(t, probe, t_one);
  double eta = 0.1;
  for (int s = 0; s < steps; ++s) {
    CMat ww = cur.w * cur.w.adjoint();
    CMat uu = cur.u * cur.u.adjoint();
    Complex c = Complex(0.0);
    for (int i = 0; i < k; ++i) c += (cur.w.segment(i * e, e).adjoint() * t_one * cur.w.segment(i * e, e))(0, 0);
    LevelProbe grad{k, std::vector<CMat>(static_cast<std::size_t>(k * k))};
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        CMat g = map_adjoint(t, ww.block(i * e, j * e, e, e)) -
                 c.real() * t.domain.project(uu.block(i * d, j * d, d, d));
        grad.y[static_cast<std::size_t>(i * k + j)] = g;
      }
    }
    for (int i = 0; i < k; ++i) {
      CMat& di = grad.y[static_cast<std::size_t>(i * k + i)];
      di = (0.5 * (di + di.adjoint())).eval();
      for (int j = i + 1; j < k; ++j) {
        CMat avg = 0.5 * (grad.y[static_cast<std::size_t>(i * k + j)] +
                          grad.y[static_cast<std::size_t>(j * k + i)].adjoint());
        grad.y[static_cast<std::size_t>(i * k + j)] = avg;
        grad.y[static_cast<std::size_t>(j * k + i)] = avg.adjoint();
      }
    }
    bool moved = false;
    for (int tries = 0; tries < 6 && !moved; ++tries) {
      LevelProbe next = probe;
      for (std::size_t b = 0; b < next.y.size(); ++b) next.y[b] -= eta * grad.y[b];
      normalize(next);
      ProbeValue v = evaluate(t, next, t_one);
      if (v.f < cur.f) {
        probe = std::move(next);
        cur = std::move(v);
        eta *= 1.5;
        moved = true;
      } else {
        eta *= 0.5;
      }
    }
    if (!moved) break;
  }
  return cur;
}

Certificate positivity_refutation(std::vector<CMat> blocks, int k, double image_lmin, const std::string& note) {
  Certificate c = Certificate::make(Verdict::Refuted, note);
  c.witness_kind = WitnessKind::Positivity;
  c.witness = std::move(blocks);
  c.level = k;
  c.residual = image_lmin;
  return c;
}

void require_operator_system(const SubspaceMap& t, const Tolerance& tol) {
  const Subspace& s = t.domain;
  const Eigen::Index d = s.ambient_dim();
  if (s.dim() == 0) throw InvalidInput("cp_extendable: empty domain");
  if (!contains(s, CMat::Identity(d, d), tol)) throw InvalidInput("cp_extendable: domain is not unital");
  if (!check_selfadjoint(s, tol)) throw InvalidInput("cp_extendable: domain is not selfadjoint");
  double scale = 1.0;
  for (const auto& img : t.images) scale = std::max(scale, img.norm());
  for (const auto& b : s.basis()) {
    if ((t.apply(b.adjoint()) - t.apply(b).adjoint()).norm() > 10 * tol.cert_tol * scale) {
      throw InvalidInput("cp_extendable: map is not *-linear");
    }
  }
}

// Turns the exit gap of an infeasible Choi problem into a PSD element of
// M_e(S) whose image has a negative expectation on the maximally entangled
// vector.
std::optional<Certificate> gap_witness(const SubspaceMap& t, const CMat& gap, const Tolerance& tol) {
  const Eigen::Index d = t.domain.ambient_dim();
  const Eigen::Index e = t.codomain_dim;
  if (gap.norm() == 0.0 || e > 16) return std::nullopt;
  const int k = static_cast<int>(e);
  std::vector<CMat> blocks(static_cast<std::size_t>(k * k));
  for (Eigen::Index p = 0; p < e; ++p) {
    for (Eigen::Index q = 0; q < e; ++q) {
      CMat x(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = std::conj(gap(i * e + p, j * e + q));
      }
      blocks[static_cast<std::size_t>(p * k + q)] = t.domain.project(x);
    }
  }
  CMat xm = assemble_level(blocks, k);
  xm = (0.5 * (xm + xm.adjoint())).eval();
  double lo = lambda_min(xm);
  if (lo < 0) {
    for (int i = 0; i < k; ++i) blocks[static_cast<std::size_t>(i * k + i)] -= lo * CMat::Identity(d, d);
  }
  double nrm = op_norm(assemble_level(blocks, k));
  if (nrm == 0.0) return std::nullopt;
  for (auto& b : blocks) b /= nrm;
  PositivityCheck chk = check_positivity_witness(t, blocks, k);
  if (chk.image_lambda_min < -tol.cert_tol && chk.input_lambda_min >= -tol.cert_tol / 2) {
    return positivity_refutation(std::move(blocks), k, chk.image_lambda_min, "separating direction of the Choi problem");
  }
  return std::nullopt;
}

SubspaceMap subject_map(const SubspaceMap& t, const std::string& subject, const Tolerance& tol) {
  if (subject == "map") return t;
  if (subject == "selfadjoint_extension" || subject == "inverse_selfadjoint_extension") {
    auto ext = selfadjoint_extension(t, tol);
    if (!ext) throw InvalidInput("witness subject cannot be rebuilt");
    return subject == "selfadjoint_extension" ? *ext : inverse_map(*ext, tol);
  }
  if (subject == "paulsen") return paulsen_map(t, tol);
  if (subject == "inverse_paulsen") return inverse_map(paulsen_map(t, tol), tol);
  throw InvalidInput("unknown witness subject '" + subject + "'");
}

}  // namespace

CMat choi_matrix(const SubspaceMap& t) {
  const Eigen::Index d = t.domain.ambient_dim();
  const Eigen::Index e = t.codomain_dim;
  CMat c(d * e, d * e);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) c.block(i * e, j * e, e, e) = t.apply(matrix_unit(d, i, j));
  }
  return c;
}

CMat amplify_map(const SubspaceMap& t, const std::vector<CMat>& blocks, int k) {
  std::vector<CMat> images;
  images.reserve(blocks.size());
  for (const auto& b : blocks) images.push_back(t.apply(b));
  return assemble_level(images, k);
}

PositivityCheck check_positivity_witness(const SubspaceMap& t, const std::vector<CMat>& blocks, int k) {
  PositivityCheck c;
  c.input_lambda_min = lambda_min(assemble_level(blocks, k));
  c.image_lambda_min = lambda_min(amplify_map(t, blocks, k));
  for (const auto& b : blocks) c.membership = std::max(c.membership, t.domain.distance(b));
  return c;
}

double level_norm_change(const SubspaceMap& t, const std::vector<CMat>& blocks, int k) {
  double in = op_norm(assemble_level(blocks, k));
  if (in == 0.0) return 0.0;
  return op_norm(amplify_map(t, blocks, k)) / in - 1.0;
}

std::optional<Certificate> find_positivity_witness(const SubspaceMap& t, const Context& ctx, int levels) {
  const Eigen::Index d = t.domain.ambient_dim();
  const CMat t_one = t.apply(CMat::Identity(d, d));
  const auto herm = hermitian_spanning_set(t.domain);
  Rng rng(derive_seed(ctx.seed, "positivity-witness"));
  std::optional<ProbeValue> best;
  int best_k = 0;
  for (int k = 1; k <= levels; ++k) {
    std::vector<std::pair<double, LevelProbe>> pool;
    for (int trial = 0; trial < ctx.trials; ++trial) {
      LevelProbe p = random_probe(herm, t.domain, k, rng);
      normalize(p);
      ProbeValue v = evaluate(t, p, t_one);
      pool.emplace_back(v.f, std::move(p));
    }
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t keep = std::min<std::size_t>(3, pool.size());
    for (std::size_t i = 0; i < keep; ++i) {
      ProbeValue v = refine(t, pool[i].second, t_one, 50);
      if (!best || v.f < best->f) {
        best = std::move(v);
        best_k = k;
      }
    }
    if (best && best->f < -ctx.tol.cert_tol) break;
  }
  if (!best || best->f >= -ctx.tol.cert_tol / 2) return std::nullopt;
  // Store the PSD element normalized to operator norm one.
  std::vector<CMat> blocks = best->p;
  double n = op_norm(assemble_level(blocks, best_k));
  for (auto& b : blocks) b /= n;
  PositivityCheck chk = check_positivity_witness(t, blocks, best_k);
  return positivity_refutation(std::move(blocks), best_k, chk.image_lambda_min, "randomized level search");
}

Certificate cp_extendable(const SubspaceMap& t, const Context& ctx) {
  require_operator_system(t, ctx.tol);
  const Eigen::Index d = t.domain.ambient_dim();
  const Eigen::Index e = t.codomain_dim;
  const Tolerance& tol = ctx.tol;

  if (t.domain.dim() == d * d) {
    // The extension is T itself; its Choi matrix decides.
    CMat c = choi_matrix(t);
    double lo = lambda_min(c);
    if (lo >= -tol.cert_tol * std::max(1.0, op_norm(c))) {
      Certificate cert = Certificate::make(Verdict::Certified, "Choi matrix of a map on the full algebra");
      cert.object = c;
      cert.residual = std::max(0.0, -lo);
      return cert;
    }
    std::vector<CMat> units;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) units.push_back(matrix_unit(d, i, j));
    }
    return positivity_refutation(std::move(units), static_cast<int>(d), lo, "matrix units [E_ij]");
  }

  const int levels = static_cast<int>(std::min<Eigen::Index>(e, ctx.max_level));
  std::optional<Certificate> witness = find_positivity_witness(t, ctx, levels);
  if (witness && -witness->residual > tol.cert_tol) return *witness;

  ChoiConstraint constraint(t);
  SdpResult sdp = sdp_solve(constraint, tol);
  if (sdp.cert.certified()) {
    double agreement = 0.0;
    Certificate cert = sdp.cert;
    cert.note = "Choi matrix of a completely positive extension";
    // The certified Choi matrix must reproduce T on S.
    agreement = constraint.defect(cert.object).norm();
    cert.residual = std::max(cert.residual, agreement);
    if (witness) return resolve_tie(t, cert, *witness, tol);
    return cert;
  }
  if (auto g = gap_witness(t, sdp.gap, tol)) return *g;
  if (witness) return *witness;
  Certificate out = sdp.cert;
  out.note = "no completely positive extension found and no witness found";
  return out;
}

Certificate level_k_isometric(const SubspaceMap& t, int k, int trials, const Context& ctx) {
  if (k < 1) throw InvalidInput("level_k_isometric: level must be positive");
  const Subspace& s = t.domain;
  Rng rng(derive_seed(ctx.seed, "level-" + std::to_string(k)));
  double worst = 0.0;
  std::vector<CMat> worst_blocks;
  auto consider = [&](std::vector<CMat> blocks) {
    double ch = level_norm_change(t, blocks, k);
    if (std::abs(ch) > std::abs(worst)) {
      worst = ch;
      worst_blocks = std::move(blocks);
    }
  };
  if (k == 1) {
    for (const auto& b : s.basis()) consider({b});
  }
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<CMat> blocks;
    for (int i = 0; i < k * k; ++i) blocks.push_back(s.combine(random_gaussian(s.dim(), 1, rng)));
    consider(std::move(blocks));
  }
  if (std::abs(worst) > ctx.tol.cert_tol) {
    Certificate c = Certificate::make(Verdict::Refuted, "norm changes at level " + std::to_string(k));
    c.witness_kind = WitnessKind::LevelNorm;
    c.witness = std::move(worst_blocks);
    c.level = k;
    c.residual = worst;
    return c;
  }
  Certificate c = Certificate::make(Verdict::Certified, "no norm change found at level " + std::to_string(k));
  c.level = k;
  c.residual = std::abs(worst);
  c.iterations = trials;
  return c;
}

std::optional<SubspaceMap> selfadjoint_extension(const SubspaceMap& t, const Tolerance& tol) {
  const Subspace& a = t.domain;
  const Eigen::Index d = a.ambient_dim();
  Subspace diag = diag_part(a, tol);
  double scale = 1.0;
  for (const auto& img : t.images) scale = std::max(scale, img.norm());
  for (const auto& x : diag.basis()) {
    if ((t.apply(x.adjoint()) - t.apply(x).adjoint()).norm() > 10 * tol.cert_tol * scale) return std::nullopt;
  }
  std::vector<CMat> spanning = a.basis();
  for (const auto& x : a.basis()) spanning.push_back(x.adjoint());
  Subspace s = span_of(spanning, d, tol);
  const Eigen::Index k = a.dim();
  CMat cols(d * d, 2 * k);
  for (Eigen::Index l = 0; l < k; ++l) {
    cols.col(l) = vectorize(a.basis_element(l));
    cols.col(k + l) = vectorize(a.basis_element(l).adjoint());
  }
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(cols);
  SubspaceMap ext;
  ext.domain = s;
  ext.codomain_dim = t.codomain_dim;
  for (const auto& b : s.basis()) {
    CVec c = cod.solve(vectorize(b));
    CMat img = CMat::Zero(t.codomain_dim, t.codomain_dim);
    for (Eigen::Index l = 0; l < k; ++l) {
      img += c(l) * t.images[static_cast<std::size_t>(l)];
      img += c(k + l) * t.images[static_cast<std::size_t>(l)].adjoint();
    }
    ext.images.push_back(img);
  }
  ext.unital = t.unital;
  return ext;
}

SubspaceMap paulsen_map(const SubspaceMap& t, const Tolerance& tol) {
  const Eigen::Index d = t.domain.ambient_dim();
  const Eigen::Index e = t.codomain_dim;
  std::vector<CMat> in, out;
  auto corner = [](Eigen::Index n, const CMat& x11, const CMat& x12, const CMat& x21, const CMat& x22) {
    CMat m(2 * n, 2 * n);
    m << x11, x12, x21, x22;
    return m;
  };
  const CMat zd = CMat::Zero(d, d), ze = CMat::Zero(e, e);
  const CMat id = CMat::Identity(d, d), ie = CMat::Identity(e, e);
  in.push_back(corner(d, id, zd, zd, zd));
  out.push_back(corner(e, ie, ze, ze, ze));
  in.push_back(corner(d, zd, zd, zd, id));
  out.push_back(corner(e, ze, ze, ze, ie));
  for (Eigen::Index l = 0; l < t.domain.dim(); ++l) {
    const CMat& a = t.domain.basis_element(l);
    const CMat& ta = t.images[static_cast<std::size_t>(l)];
    in.push_back(corner(d, zd, a, zd, zd));
    out.push_back(corner(e, ze, ta, ze, ze));
    in.push_back(corner(d, zd, zd, a.adjoint(), zd));
    out.push_back(corner(e, ze, ze, ta.adjoint(), ze));
  }
  SubspaceMap m = SubspaceMap::from_pairs(in, out, 2 * d, 2 * e, tol);
  m.unital = true;
  return m;
}

SubspaceMap inverse_map(const SubspaceMap& t, const Tolerance& tol) {
  SubspaceMap inv = SubspaceMap::from_pairs(t.images, t.domain.basis(), t.codomain_dim,
                                            t.domain.ambient_dim(), tol);
  inv.unital = t.unital;
  return inv;
}

Certificate complete_contraction(const SubspaceMap& t, const Context& ctx) {
  const Eigen::Index d = t.domain.ambient_dim();
  for (int k = 1; k <= ctx.max_level; ++k) {
    Certificate c = level_k_isometric(t, k, ctx.trials, ctx);
    if (c.refuted() && c.residual > ctx.tol.cert_tol) return c;
  }
  if (t.unital && contains(t.domain, CMat::Identity(d, d), ctx.tol)) {
    if (auto ext = selfadjoint_extension(t, ctx.tol)) {
      Certificate c = cp_extendable(*ext, ctx);
      c.subject = "selfadjoint_extension";
      return c;
    }
  }
  Certificate c = cp_extendable(paulsen_map(t, ctx.tol), ctx);
  c.subject = "paulsen";
  return c;
}

Certificate complete_isometry(const SubspaceMap& t, const Context& ctx) {
  const Tolerance& tol = ctx.tol;
  const Eigen::Index d = t.domain.ambient_dim();
  if (t.domain.dim() == 0) return Certificate::make(Verdict::Certified, "zero domain");

  CMat ker = null_space(t.matrix(), tol.rank_tol);
  if (ker.cols() > 0) {
    Certificate c = Certificate::make(Verdict::Refuted, "map is not injective");
    c.witness_kind = WitnessKind::Kernel;
    CMat x = t.domain.combine(ker.col(0));
    c.witness = {x / op_norm(x)};
    c.level = 1;
    c.residual = -1.0;
    return c;
  }
  for (int k = 1; k <= ctx.max_level; ++k) {
    Certificate c = level_k_isometric(t, k, ctx.trials, ctx);
    if (c.refuted()) return c;
  }

  SubspaceMap system;
  std::string subject;
  if (t.unital && contains(t.domain, CMat::Identity(d, d), tol)) {
    auto ext = selfadjoint_extension(t, tol);
    if (!ext) {
      // A unital complete isometry is *-preserving on the diagonal, so some
      // I + i t h must change norm.
      Subspace diag = diag_part(t.domain, tol);
      const CMat id = CMat::Identity(d, d);
      for (const auto& x : diag.basis()) {
        for (const CMat& h : {CMat(x + x.adjoint()), CMat(Complex(0, 1) * (x - x.adjoint()))}) {
          for (double s : {1e-3, -1e-3, 1e-2, -1e-2, 0.1, -0.1, 1.0, -1.0}) {
            CMat probe = id + Complex(0, s) * h;
            double ch = level_norm_change(t, {probe}, 1);
            if (std::abs(ch) > tol.cert_tol) {
              Certificate c = Certificate::make(Verdict::Refuted, "not *-preserving on the diagonal");
              c.witness_kind = WitnessKind::LevelNorm;
              c.witness = {probe};
              c.level = 1;
              c.residual = ch;
              return c;
            }
          }
        }
      }
      return Certificate::make(Verdict::Inconclusive, "selfadjoint extension is not well defined");
    }
    system = std::move(*ext);
    subject = "selfadjoint_extension";
  } else {
    system = paulsen_map(t, tol);
    subject = "paulsen";
  }

  CMat sker = null_space(system.matrix(), tol.rank_tol);
  if (sker.cols() > 0) {
    Certificate c = Certificate::make(Verdict::Refuted, "operator system extension is not injective");
    c.witness_kind = WitnessKind::Kernel;
    CMat x = system.domain.combine(sker.col(0));
    c.witness = {x / op_norm(x)};
    c.level = 1;
    c.residual = -1.0;
    c.subject = subject;
    return c;
  }

  Certificate fwd = cp_extendable(system, ctx);
  if (fwd.refuted()) {
    fwd.subject = subject;
    return fwd;
  }
  Certificate bwd = cp_extendable(inverse_map(system, tol), ctx);
  if (bwd.refuted()) {
    bwd.subject = "inverse_" + subject;
    return bwd;
  }
  if (fwd.certified() && bwd.certified()) {
    Certificate c = Certificate::make(Verdict::Certified, "map and inverse are completely positive on " + subject);
    c.object = fwd.object;
    c.residual = std::max(fwd.residual, bwd.residual);
    c.iterations = fwd.iterations + bwd.iterations;
    c.subject = subject;
    return c;
  }
  Certificate c = Certificate::make(Verdict::Inconclusive,
                                    std::string("completely positive extension not settled for the ") +
                                        (fwd.inconclusive() ? "map" : "inverse"));
  c.residual = std::max(fwd.residual, bwd.residual);
  c.iterations = fwd.iterations + bwd.iterations;
  c.subject = subject;
  return c;
}

double witness_violation(const SubspaceMap& t, const Certificate& c, const Tolerance& tol) {
  if (!c.refuted()) return 0.0;
  SubspaceMap m = subject_map(t, c.subject, tol);
  switch (c.witness_kind) {
    case WitnessKind::Kernel: {
      if (c.witness.empty()) return 0.0;
      const CMat& x = c.witness[0];
      double nx = op_norm(x);
      if (nx == 0.0 || m.domain.distance(x) > tol.cert_tol * x.norm()) return 0.0;
      return 1.0 - op_norm(m.apply(x)) / nx;
    }
    case WitnessKind::LevelNorm: {
      for (const auto& b : c.witness) {
        if (m.domain.distance(b) > tol.cert_tol * std::max(1.0, b.norm())) return 0.0;
      }
      return std::abs(level_norm_change(m, c.witness, c.level));
    }
    case WitnessKind::Positivity: {
      PositivityCheck chk = check_positivity_witness(m, c.witness, c.level);
      double scale = op_norm(assemble_level(c.witness, c.level));
      if (chk.membership > tol.cert_tol * std::max(1.0, scale)) return 0.0;
      if (chk.input_lambda_min < -tol.cert_tol / 2 * scale) return 0.0;
      return std::max(0.0, -chk.image_lambda_min / scale);
    }
    default:
      return 0.0;
  }
}

Certificate resolve_tie(const SubspaceMap& t, const Certificate& certified, const Certificate& refuted,
                        const Tolerance& tol) {
  (void)certified;
  if (witness_violation(t, refuted, tol) > tol.cert_tol / 2) return refuted;
  throw StructureFailure("certificate and witness disagree and the witness does not re-verify");
}

}  // namespace opalg
