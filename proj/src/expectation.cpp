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

#include "opalg/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "opalg/envelope.hpp"
#include "opalg/linalg.hpp"
#include "opalg/positivity.hpp"

namespace opalg {

namespace {

constexpr std::size_t kTripleCap = 4096;

// Calls f(i, j, k) on every index triple, or on kTripleCap random ones when
// there are more.
void for_each_triple(std::size_t n1, std::size_t n2, std::size_t n3, Rng& rng,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& f) {
  const std::size_t total = n1 * n2 * n3;
  if (total == 0) return;
  if (total <= kTripleCap) {
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) {
        for (std::size_t k = 0; k < n3; ++k) f(i, j, k);
      }
    }
    return;
  }
  std::uniform_int_distribution<std::size_t> u1(0, n1 - 1), u2(0, n2 - 1), u3(0, n3 - 1);
  for (std::size_t s = 0; s < kTripleCap; ++s) {
    std::size_t i = u1(rng), j = u2(rng), k = u3(rng);
    f(i, j, k);
  }
}

CMat random_element(const Subspace& s, Rng& rng) {
  CMat c = random_gaussian(s.dim(), 1, rng);
  return s.combine(c.col(0));
}

Subspace selfadjoint_span(const Subspace& a, const Tolerance& tol) {
  std::vector<CMat> mats = a.basis();
  for (const auto& x : a.basis()) mats.push_back(x.adjoint());
  return span_of(mats, a.ambient_dim(), tol);
}

Certificate dense_certificate(const Subspace& m, const Subspace& a, const Tolerance& tol, Eigen::Index& span_dim) {
  Subspace s = selfadjoint_span(a, tol);
  span_dim = s.dim();
  bool dense = s.dim() == m.dim() && contains_all(s, m, tol);
  return Certificate::make(dense ? Verdict::Certified : Verdict::Refuted,
                           "span(A + A*) has dimension " + std::to_string(s.dim()) + " of " +
                               std::to_string(m.dim()));
}

double bimodule_residual(const SubspaceMap& phi, const Subspace& d, Rng& rng) {
  double worst = 0.0;
  const auto& db = d.basis();
  const auto& xb = phi.domain.basis();
  for_each_triple(db.size(), xb.size(), db.size(), rng, [&](std::size_t i, std::size_t j, std::size_t k) {
    CMat lhs = phi.apply(db[i] * xb[j] * db[k]);
    CMat rhs = db[i] * phi.apply(xb[j]) * db[k];
    worst = std::max(worst, (lhs - rhs).norm());
  });
  return worst;
}

}  // namespace

Complex TraceState::operator()(const CMat& x) const { return (density * x).trace(); }

TraceState TraceState::from_block_masses(const BlockStructure& m, const std::vector<double>& masses) {
  if (masses.size() != static_cast<std::size_t>(m.num_blocks)) {
    throw InvalidInput("trace state: expected " + std::to_string(m.num_blocks) + " block weights, got " +
                       std::to_string(masses.size()));
  }
  double total = 0.0;
  for (double w : masses) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("trace state: block weights must be positive");
    total += w;
  }
  TraceState t;
  const Eigen::Index d = m.central_projections.empty() ? 0 : m.central_projections[0].rows();
  t.density = CMat::Zero(d, d);
  for (int k = 0; k < m.num_blocks; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    double w = masses[ks] / total / (m.block_dims[ks] * m.multiplicities[ks]);
    t.block_weights.push_back(w);
    t.density += w * m.central_projections[ks];
  }
  return t;
}

TraceState TraceState::normalized_trace(const BlockStructure& m) {
  std::vector<double> masses;
  for (int k = 0; k < m.num_blocks; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    masses.push_back(static_cast<double>(m.block_dims[ks] * m.multiplicities[ks]));
  }
  return from_block_masses(m, masses);
}

double trace_state_residual(const TraceState& tau, const Subspace& m, const Context& ctx) {
  const Eigen::Index d = m.ambient_dim();
  double worst = std::abs(tau(CMat::Identity(d, d)) - 1.0);
  Rng rng(derive_seed(ctx.seed, "trace-state"));
  for (int s = 0; s < 20; ++s) {
    CMat x = random_element(m, rng);
    CMat y = random_element(m, rng);
    x /= x.norm();
    y /= y.norm();
    worst = std::max(worst, std::abs(tau(x * y) - tau(y * x)));
  }
  for (double w : tau.block_weights) {
    if (!(w > 0.0)) worst = std::max(worst, 1.0);
  }
  return worst;
}

ExpectationResult cond_exp(const Subspace& m, const TraceState& tau, const Subspace& a, const Context& ctx) {
  const Tolerance& tol = ctx.tol;
  const Eigen::Index d = m.ambient_dim();
  if (a.ambient_dim() != d) throw InvalidInput("cond_exp: A and M live in different matrix algebras");
  if (!contains_all(m, a, tol)) throw InvalidInput("cond_exp: A is not contained in M");
  if (!check_unital(a, tol)) throw InvalidInput("cond_exp: A is not unital");

  ExpectationResult r;
  r.diagonal = diag_part(a, tol);
  const auto& db = r.diagonal.basis();
  const auto k = static_cast<Eigen::Index>(db.size());
  CMat gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      gram(j, i) = tau(db[static_cast<std::size_t>(j)].adjoint() * db[static_cast<std::size_t>(i)]);
    }
  }
  Eigen::SelfAdjointEigenSolver<CMat> ge(0.5 * (gram + gram.adjoint()), Eigen::EigenvaluesOnly);
  if (ge.eigenvalues()(0) <= 0.0) throw StructureFailure("cond_exp: trace state is not faithful on the diagonal");
  r.gram_condition = ge.eigenvalues()(k - 1) / ge.eigenvalues()(0);
  Eigen::LLT<CMat> llt(0.5 * (gram + gram.adjoint()));
  std::vector<CMat> lhs_forms;
  for (const auto& dj : db) lhs_forms.push_back(tau.density * dj.adjoint());

  auto project = [&](const CMat& x) {
    CVec rhs(k);
    for (Eigen::Index j = 0; j < k; ++j) rhs(j) = (lhs_forms[static_cast<std::size_t>(j)] * x).trace();
    CVec c = llt.solve(rhs);
    return r.diagonal.combine(c);
  };
  r.phi = SubspaceMap::from_function(m, d, project);

  // Invariants.
  const CMat id = CMat::Identity(d, d);
  r.unital_residual = (r.phi.apply(id) - id).norm();
  for (const auto& x : m.basis()) {
    CMat px = r.phi.apply(x);
    r.idempotence_residual = std::max(r.idempotence_residual, (r.phi.apply(px) - px).norm());
    r.trace_preservation_residual = std::max(r.trace_preservation_residual, std::abs(tau(px) - tau(x)));
    for (const auto& dj : db) {
      r.orthogonality_residual = std::max(r.orthogonality_residual, std::abs(tau(dj.adjoint() * (x - px))));
    }
  }
  Rng rng(derive_seed(ctx.seed, "cond-exp"));
  r.bimodule_residual = bimodule_residual(r.phi, r.diagonal, rng);
  for (int s = 0; s < 20; ++s) {
    CMat x = random_element(m, rng);
    x /= x.norm();
    r.positivity_residual = std::max(r.positivity_residual, -lambda_min(r.phi.apply(x.adjoint() * x)));
  }
  const double bound = tol.cert_tol;
  struct Check {
    const char* name;
    double value;
  };
  for (const Check& c : {Check{"idempotence", r.idempotence_residual}, Check{"unital", r.unital_residual},
                         Check{"bimodule", r.bimodule_residual},
                         Check{"trace preservation", r.trace_preservation_residual},
                         Check{"orthogonality", r.orthogonality_residual},
                         Check{"positivity", r.positivity_residual}}) {
    if (!(c.value <= bound)) {
      throw StructureFailure(std::string("cond_exp: ") + c.name + " residual " + std::to_string(c.value) +
                             " exceeds tolerance");
    }
  }

  // Multiplicativity on A over basis pairs.
  const auto& ab = a.basis();
  double worst = 0.0;
  std::size_t wi = 0, wj = 0;
  for_each_triple(ab.size(), ab.size(), 1, rng, [&](std::size_t i, std::size_t j, std::size_t) {
    double res = (r.phi.apply(ab[i] * ab[j]) - r.phi.apply(ab[i]) * r.phi.apply(ab[j])).norm();
    if (res > worst) {
      worst = res;
      wi = i;
      wj = j;
    }
  });
  if (worst <= bound) {
    r.multiplicative_on_a = Certificate::make(Verdict::Certified, "multiplicative on all basis pairs of A");
  } else {
    r.multiplicative_on_a = Certificate::make(Verdict::Refuted, "Φ(ab) ≠ Φ(a)Φ(b) for the witness pair");
    r.multiplicative_on_a.witness_kind = WitnessKind::Other;
    r.multiplicative_on_a.witness = {ab[wi], ab[wj]};
  }
  r.multiplicative_on_a.residual = worst;
  return r;
}

CandidateCheck check_expectation_candidate(const SubspaceMap& phi, const Subspace& diagonal, const TraceState& tau,
                                           const Tolerance& tol) {
  const Eigen::Index d = phi.domain.ambient_dim();
  if (phi.codomain_dim != d || diagonal.ambient_dim() != d) {
    throw InvalidInput("candidate expectation: domain, codomain and diagonal sizes differ");
  }
  CandidateCheck c;
  const CMat id = CMat::Identity(d, d);
  c.unital = contains(phi.domain, id, tol) ? (phi.apply(id) - id).norm() : 1.0;
  for (const auto& x : phi.domain.basis()) c.range = std::max(c.range, diagonal.distance(phi.apply(x)));
  for (const auto& x : diagonal.basis()) {
    double fixed = phi.domain.distance(x) > tol.cert_tol ? 1.0 : (phi.apply(x) - x).norm();
    c.range = std::max(c.range, fixed);
  }
  Rng rng(derive_seed(0, "candidate-bimodule"));
  c.bimodule = bimodule_residual(phi, diagonal, rng);
  for (const auto& x : phi.domain.basis()) {
    c.trace_preservation = std::max(c.trace_preservation, std::abs(tau(phi.apply(x)) - tau(x)));
  }
  if (!(c.unital <= tol.cert_tol)) c.failures.emplace_back("unital");
  if (!(c.range <= tol.cert_tol)) c.failures.emplace_back("range");
  if (!(c.bimodule <= tol.cert_tol)) c.failures.emplace_back("bimodule");
  if (!(c.trace_preservation <= tol.cert_tol)) c.failures.emplace_back("trace_preserving");
  return c;
}

std::string to_string(UniquenessVerdict v) {
  switch (v) {
    case UniquenessVerdict::Equal:
      return "EQUAL";
    case UniquenessVerdict::Different:
      return "DIFFERENT";
    case UniquenessVerdict::PreconditionFailed:
      return "PRECONDITION_FAILED";
  }
  return "?";
}

UniquenessReport uniqueness_check(const SubspaceMap& phi, const SubspaceMap& psi, const Subspace& diagonal,
                                  const TraceState& tau, const Tolerance& tol) {
  if (!same_subspace(phi.domain, psi.domain, tol)) {
    throw InvalidInput("uniqueness_check: candidates have different domains");
  }
  UniquenessReport r;
  r.phi = check_expectation_candidate(phi, diagonal, tau, tol);
  r.psi = check_expectation_candidate(psi, diagonal, tau, tol);
  for (const auto& x : phi.domain.basis()) {
    CMat diff = phi.apply(x) - psi.apply(x);
    r.distance = std::max(r.distance, tau(diff.adjoint() * diff).real());
  }
  if (!r.phi.ok() || !r.psi.ok()) {
    r.verdict = UniquenessVerdict::PreconditionFailed;
  } else {
    r.verdict = r.distance <= tol.cert_tol * tol.cert_tol ? UniquenessVerdict::Equal : UniquenessVerdict::Different;
  }
  return r;
}

SubspaceMap group_average(const Subspace& domain, Eigen::Index codomain_dim, const std::vector<CMat>& unitaries) {
  if (unitaries.empty()) throw InvalidInput("group_average: no unitaries");
  return SubspaceMap::from_function(domain, codomain_dim, [&](const CMat& x) {
    CMat acc = CMat::Zero(codomain_dim, codomain_dim);
    for (const auto& u : unitaries) acc += u * x * u.adjoint();
    return CMat(acc / static_cast<double>(unitaries.size()));
  });
}

std::vector<CMat> diagonal_phase_group(Eigen::Index n) {
  std::vector<CMat> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    CMat u = CMat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      u(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(n));
    }
    out.push_back(u);
  }
  return out;
}

Factorization factorize_in(const Subspace& m, const Subspace& a, const CMat& b, const Context& ctx) {
  try {
    return factorize(a, b, ctx.tol);
  } catch (const UnsupportedAlgebra&) {
  }
  BlockStructure bs = wedderburn(m, ctx);
  const Eigen::Index d = m.ambient_dim();
  CMat full = CMat::Zero(d, d);
  for (int k = 0; k < bs.num_blocks; ++k) {
    std::vector<CMat> parts;
    for (const auto& x : a.basis()) parts.push_back(bs.compress(k, x));
    Subspace ak = span_of(parts, bs.block_dims[static_cast<std::size_t>(k)], ctx.tol);
    Factorization fk = factorize(ak, bs.compress(k, b), ctx.tol);
    full += bs.embed(k, fk.a);
  }
  Factorization f;
  f.a = full;
  const double bn = op_norm(b);
  f.residual = op_norm(full.adjoint() * full - b) / bn;
  f.membership = a.distance(full) / std::max(1.0, full.norm());
  CMat inv = full.inverse();
  f.inverse_membership = a.distance(inv) / std::max(1.0, inv.norm());
  return f;
}

TracialReport classify_tracial(const Subspace& m, const TraceState& tau, const Subspace& a, const Context& ctx) {
  const Tolerance& tol = ctx.tol;
  TracialReport r;
  r.expectation = cond_exp(m, tau, a, ctx);
  const SubspaceMap& phi = r.expectation.phi;
  r.m_dim = m.dim();

  double tp = 0.0;
  for (const auto& x : a.basis()) tp = std::max(tp, std::abs(tau(phi.apply(x)) - tau(x)));
  if (r.expectation.multiplicative_on_a.refuted()) {
    r.tracial = r.expectation.multiplicative_on_a;
  } else {
    r.tracial = Certificate::make(tp <= tol.cert_tol ? Verdict::Certified : Verdict::Refuted,
                                  "Φ is multiplicative and τ-preserving on A");
  }
  r.tracial.residual = std::max(r.expectation.multiplicative_on_a.residual, tp);

  r.dense = dense_certificate(m, a, tol, r.span_dim);
  if (r.tracial.certified() && r.dense.certified()) {
    r.subdiagonal = Certificate::make(Verdict::Certified, "tracial and A + A* spans M");
  } else if (r.tracial.refuted() || r.dense.refuted()) {
    r.subdiagonal = Certificate::make(Verdict::Refuted, r.tracial.refuted() ? "not tracial" : "A + A* does not span M");
  } else {
    r.subdiagonal = Certificate::make(Verdict::Inconclusive);
  }
  r.notes.emplace_back("weak* continuity and normality hold automatically in finite dimension");
  r.notes.emplace_back("Φ is the unique τ-preserving conditional expectation onto Δ(A)");
  if (!r.subdiagonal.certified()) return r;

  try {
    EnvelopeResult env = cstar_envelope(a, ctx);
    r.envelope_dims = env.envelope_dims;
    bool full = env.shilov_blocks.empty() && same_subspace(env.generated_algebra, m, tol);
    r.envelope_is_m = Certificate::make(full ? Verdict::Certified : Verdict::Refuted,
                                        full ? "C*-envelope of A is M" : "envelope differs from M");
    if (!full) r.notes.emplace_back("counterexample alarm: subdiagonal A whose envelope is not M");
  } catch (const EnvelopeInconclusive& e) {
    r.envelope_is_m = Certificate::make(Verdict::Inconclusive, e.what());
  }

  Rng rng(derive_seed(ctx.seed, "tracial-factor"));
  const Eigen::Index d = m.ambient_dim();
  try {
    for (int s = 0; s < 10; ++s) {
      CMat g = random_element(m, rng);
      CMat b = g.adjoint() * g + 0.1 * g.norm() * g.norm() * CMat::Identity(d, d);
      Factorization f = factorize_in(m, a, b, ctx);
      ++r.factor_samples;
      r.worst_factor_residual =
          std::max({r.worst_factor_residual, f.residual, f.membership, f.inverse_membership});
    }
    bool ok = r.worst_factor_residual <= tol.cert_tol;
    r.factorization = Certificate::make(ok ? Verdict::Certified : Verdict::Refuted,
                                        std::to_string(r.factor_samples) + " sampled factorizations");
    r.factorization->residual = r.worst_factor_residual;
  } catch (const UnsupportedAlgebra& e) {
    r.factorization = Certificate::make(Verdict::Inconclusive, e.what());
  }
  return r;
}

ProjectionReport ccp_projection_is_expectation(const SubspaceMap& p, const Subspace& b, const Context& ctx) {
  const Tolerance& tol = ctx.tol;
  const Subspace& a = p.domain;
  const Eigen::Index d = a.ambient_dim();
  if (p.codomain_dim != d || b.ambient_dim() != d) throw InvalidInput("projection: P must map A into A");
  if (!contains_all(a, b, tol)) throw InvalidInput("projection: B is not contained in A");

  ProjectionReport r;
  const CMat id = CMat::Identity(d, d);
  r.unital_residual = contains(a, id, tol) ? (p.apply(id) - id).norm() : 1.0;
  for (const auto& x : a.basis()) {
    CMat px = p.apply(x);
    r.idempotence_residual = std::max(r.idempotence_residual, (p.apply(px) - px).norm());
    r.range_residual = std::max(r.range_residual, b.distance(px));
  }
  for (const auto& x : b.basis()) r.range_residual = std::max(r.range_residual, (p.apply(x) - x).norm());
  if (!(r.unital_residual <= tol.cert_tol)) r.failures.emplace_back("unital");
  if (!(r.idempotence_residual <= tol.cert_tol)) r.failures.emplace_back("idempotent");
  if (!(r.range_residual <= tol.cert_tol)) r.failures.emplace_back("range");
  r.contraction = complete_contraction(p, ctx);
  if (!r.contraction.certified()) r.failures.emplace_back("complete_contraction");

  Rng rng(derive_seed(ctx.seed, "projection-bimodule"));
  const auto& bb = b.basis();
  const auto& ab = a.basis();
  std::vector<CMat> worst_triple;
  for_each_triple(bb.size(), ab.size(), bb.size(), rng, [&](std::size_t i, std::size_t j, std::size_t k) {
    double res = (p.apply(bb[i] * ab[j] * bb[k]) - bb[i] * p.apply(ab[j]) * bb[k]).norm();
    if (res > r.bimodule_residual || worst_triple.empty()) {
      r.bimodule_residual = std::max(r.bimodule_residual, res);
      worst_triple = {bb[i], ab[j], bb[k]};
    }
  });

  if (!r.failures.empty()) {
    std::string note = "precondition failed:";
    for (const auto& f : r.failures) note += " " + f;
    r.verdict = Certificate::make(Verdict::Inconclusive, note);
  } else if (r.bimodule_residual <= tol.cert_tol) {
    r.verdict = Certificate::make(Verdict::Certified, "bimodule identity holds on basis triples");
  } else {
    r.verdict = Certificate::make(Verdict::Refuted, "counterexample alarm: P(b1 a b2) ≠ b1 P(a) b2");
    r.verdict.witness_kind = WitnessKind::Other;
    r.verdict.witness = worst_triple;
    r.alarm = true;
  }
  r.verdict.residual = r.bimodule_residual;
  return r;
}

DensityReport l1_density_check(const Subspace& m, const Subspace& a, const Context& ctx) {
  const Tolerance& tol = ctx.tol;
  if (!contains_all(m, a, tol)) throw InvalidInput("l1_density_check: A is not contained in M");
  DensityReport r;
  r.m_dim = m.dim();
  r.dense = dense_certificate(m, a, tol, r.span_dim);

  Subspace diag = diag_part(a, tol);
  BlockStructure bs = wedderburn(m, ctx);
  r.diagonal_central = true;
  for (int k = 0; k < bs.num_blocks; ++k) {
    const double n = bs.block_dims[static_cast<std::size_t>(k)];
    bool central = true;
    for (const auto& x : diag.basis()) {
      CMat c = bs.compress(k, x);
      CMat scalar = (c.trace() / n) * CMat::Identity(c.rows(), c.cols());
      if ((c - scalar).norm() > tol.cert_tol) central = false;
    }
    r.central_by_block.push_back(central);
    r.diagonal_central = r.diagonal_central && central;
  }
  r.notes.push_back(std::string("Δ(A) central in M: ") + (r.diagonal_central ? "yes" : "no"));

  try {
    r.logrigged = classify_ladder(a, m, ctx).logrigged;
  } catch (const Error& e) {
    r.logrigged = Certificate::make(Verdict::Inconclusive, e.what());
  }
  r.notes.push_back("logrigged rung: " + to_string(r.logrigged.verdict));
  r.hypotheses_met = r.diagonal_central && r.logrigged.certified();
  return r;
}

std::vector<DensityScanRow> density_scan(Eigen::Index d, int samples, const Context& ctx) {
  if (d < 2) throw InvalidInput("density_scan: dimension must be at least 2");
  Subspace m = full_algebra(d);
  TraceState tau = TraceState::normalized_trace(wedderburn(m, ctx));
  Rng rng(derive_seed(ctx.seed, "density-scan"));
  std::bernoulli_distribution pick(0.3);
  std::vector<DensityScanRow> rows;
  for (int s = 0; s < samples; ++s) {
    DensityScanRow row;
    GeneratorSet g{d, {}, GenMode::Algebra};
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j && pick(rng)) {
          row.units.emplace_back(i, j);
          g.generators.push_back(matrix_unit(d, i, j));
        }
      }
    }
    Subspace a = generate(g, ctx.tol);
    row.dim = a.dim();
    row.tracial = cond_exp(m, tau, a, ctx).multiplicative_on_a.certified();
    Eigen::Index span_dim = 0;
    row.dense = dense_certificate(m, a, ctx.tol, span_dim).certified();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace opalg
