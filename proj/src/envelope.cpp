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

#include "opalg/envelope.hpp"

#include <algorithm>
#include <numeric>

#include "opalg/linalg.hpp"

namespace opalg {

namespace {

constexpr int kExhaustiveLimit = 12;

Eigen::Index total_dim(const BlockStructure& bs, const std::vector<int>& blocks) {
  Eigen::Index n = 0;
  for (int k : blocks) n += bs.block_dims[static_cast<std::size_t>(k)];
  return n;
}

bool is_subset(const std::vector<int>& small, const std::vector<int>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<int> with_block(std::vector<int> s, int k) {
  s.push_back(k);
  std::sort(s.begin(), s.end());
  return s;
}

// Calls f on every size-m subset of items, in lexicographic order.
template <class F>
void for_each_subset(const std::vector<int>& items, int m, F&& f) {
  const int n = static_cast<int>(items.size());
  if (m > n) return;
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<int> s;
    for (int i : idx) s.push_back(items[static_cast<std::size_t>(i)]);
    f(s);
    int i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

class SubsetTester {
 public:
  SubsetTester(const Subspace& a, EnvelopeResult& res, const Context& ctx) : a_(a), res_(res), ctx_(ctx) {}

  Certificate test(const std::vector<int>& s) {
    for (const auto& rec : res_.log) {
      if (rec.blocks == s) return rec.cert;
    }
    for (const auto& rec : res_.log) {
      if (rec.cert.refuted() && is_subset(rec.blocks, s)) {
        Certificate c = Certificate::make(Verdict::Refuted, "contains a refuted subset");
        res_.log.push_back({s, c, true});
        return c;
      }
    }
    Certificate c;
    if (s.empty()) {
      c = Certificate::make(Verdict::Certified, "faithful representation of the generated algebra");
    } else {
      const BlockStructure& bs = res_.structure;
      std::vector<int> keep = complement_blocks(bs.num_blocks, s);
      int top = 1;
      for (int k : keep) top = std::max(top, bs.block_dims[static_cast<std::size_t>(k)]);
      Context sub = ctx_;
      sub.max_level = std::max(1, std::min(ctx_.max_level, top));
      c = complete_isometry(quotient_on(a_, bs, s), sub);
    }
    res_.log.push_back({s, c, false});
    return c;
  }

 private:
  const Subspace& a_;
  EnvelopeResult& res_;
  const Context& ctx_;
};

std::string block_list(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

void finish(EnvelopeResult& res, const Subspace& a, std::vector<int> ideal) {
  const BlockStructure& bs = res.structure;
  res.shilov_blocks = std::move(ideal);
  res.envelope_blocks = complement_blocks(bs.num_blocks, res.shilov_blocks);
  res.envelope_dims.clear();
  for (int k : res.envelope_blocks) res.envelope_dims.push_back(bs.block_dims[static_cast<std::size_t>(k)]);
  res.envelope_iso = quotient_on(a, bs, res.shilov_blocks);
}

std::vector<int> exhaustive_search(SubsetTester& tester, EnvelopeResult& res, int r) {
  // Singletons first: a refuted block prunes every superset.
  std::vector<int> candidates;
  for (int k = 0; k < r; ++k) {
    Certificate c = tester.test({k});
    if (!c.refuted()) candidates.push_back(k);
  }
  for (int m = static_cast<int>(candidates.size()); m >= 1; --m) {
    std::vector<int> found;
    std::vector<int> open;
    for_each_subset(candidates, m, [&](const std::vector<int>& s) {
      Certificate c = tester.test(s);
      if (c.certified() && found.empty()) found = s;
      if (c.inconclusive()) open = s;
    });
    if (!open.empty()) {
      throw EnvelopeInconclusive("boundary test of blocks " + block_list(open) + " is inconclusive", res);
    }
    if (!found.empty()) return found;
  }
  tester.test({});
  return {};
}

std::vector<int> greedy_search(SubsetTester& tester, EnvelopeResult& res, int r) {
  std::vector<int> s;
  for (int k = 0; k < r; ++k) {
    Certificate c = tester.test(with_block(s, k));
    if (c.inconclusive()) {
      throw EnvelopeInconclusive("greedy step at block " + std::to_string(k) + " is inconclusive", res);
    }
    if (c.certified()) s = with_block(s, k);
  }
  tester.test(s);
  // Maximality audit against the final ideal.
  for (int k : complement_blocks(r, s)) {
    Certificate c = tester.test(with_block(s, k));
    if (!c.refuted()) {
      throw EnvelopeInconclusive("greedy ideal " + block_list(s) + " fails the maximality audit at block " +
                                     std::to_string(k),
                                 res);
    }
  }
  return s;
}

}  // namespace

SubspaceMap quotient_on(const Subspace& a, const BlockStructure& bs, const std::vector<int>& ideal_blocks) {
  std::vector<int> keep = complement_blocks(bs.num_blocks, ideal_blocks);
  SubspaceMap m = SubspaceMap::from_function(a, total_dim(bs, keep),
                                             [&](const CMat& x) { return bs.represent(keep, x); });
  return m;
}

EnvelopeResult cstar_envelope(const Subspace& a, const Context& ctx) {
  const Eigen::Index d = a.ambient_dim();
  if (a.dim() == 0 || !contains(a, CMat::Identity(d, d), ctx.tol)) {
    throw InvalidInput("cstar_envelope: input subspace is not unital");
  }
  EnvelopeResult res;
  res.generated_algebra = generate({d, a.basis(), GenMode::StarAlgebra}, ctx.tol);
  res.structure = wedderburn(res.generated_algebra, ctx);
  const int r = res.structure.num_blocks;
  res.greedy = ctx.greedy || r > kExhaustiveLimit;

  SubsetTester tester(a, res, ctx);
  std::vector<int> ideal;
  if (res.greedy) {
    ideal = greedy_search(tester, res, r);
  } else {
    ideal = exhaustive_search(tester, res, r);
  }
  finish(res, a, std::move(ideal));
  return res;
}

CMat corner_embed(const CMat& x) {
  const Eigen::Index d = x.rows();
  CMat c = CMat::Zero(2 * d, 2 * d);
  c.topRightCorner(d, d) = x;
  return c;
}

Subspace corner_system(const Subspace& x, const Tolerance& tol) {
  const Eigen::Index d = x.ambient_dim();
  std::vector<CMat> gens;
  CMat top = CMat::Zero(2 * d, 2 * d);
  top.topLeftCorner(d, d).setIdentity();
  gens.push_back(top);
  gens.push_back(CMat(CMat::Identity(2 * d, 2 * d) - top));
  for (const auto& b : x.basis()) gens.push_back(corner_embed(b));
  return span_of(gens, 2 * d, tol);
}

EnvelopeResult corner_envelope(const Subspace& x, const Context& ctx) {
  const Eigen::Index d = x.ambient_dim();
  EnvelopeResult res = cstar_envelope(corner_system(x, ctx.tol), ctx);
  res.via_corner = true;
  const BlockStructure& bs = res.structure;
  const std::vector<int> keep = res.envelope_blocks;
  res.envelope_iso = SubspaceMap::from_function(x, total_dim(bs, keep),
                                                [&](const CMat& m) { return bs.represent(keep, corner_embed(m)); });
  CMat top = CMat::Zero(2 * d, 2 * d);
  top.topLeftCorner(d, d).setIdentity();
  const CMat bottom = CMat::Identity(2 * d, 2 * d) - top;
  res.has_unit = true;
  for (int k : keep) {
    auto rank = [&](const CMat& proj) { return std::lround(bs.compress(k, proj).trace().real()); };
    if (rank(top) != rank(bottom)) res.has_unit = false;
  }
  return res;
}

EnvelopeResult triple_envelope(const Subspace& x, const Context& ctx) {
  const Eigen::Index d = x.ambient_dim();
  if (x.dim() > 0 && contains(x, CMat::Identity(d, d), ctx.tol)) return cstar_envelope(x, ctx);
  return corner_envelope(x, ctx);
}

SimpleRangeResult is_simple_range_homomorphism(const SubspaceMap& t, const Context& ctx) {
  SimpleRangeResult out;
  const Eigen::Index e = t.codomain_dim;
  Subspace range = t.range(ctx.tol);
  Subspace b = generate({e, range.basis(), GenMode::StarAlgebra}, ctx.tol);
  BlockStructure bs = wedderburn(b, ctx);
  out.num_blocks = bs.num_blocks;
  if (!t.unital || !check_algebra(t.domain, ctx.tol)) {
    out.cert = Certificate::make(Verdict::Inconclusive, "not applicable: domain is not a unital algebra");
    return out;
  }
  if (bs.num_blocks != 1) {
    out.cert = Certificate::make(Verdict::Inconclusive, "not applicable: generated C*-algebra has " +
                                                            std::to_string(bs.num_blocks) + " blocks");
    return out;
  }
  Certificate ci = complete_isometry(t, ctx);
  if (!ci.certified()) {
    out.cert = ci;
    out.cert.note = "precondition: " + ci.note;
    if (ci.refuted()) out.cert.verdict = Verdict::Inconclusive;
    return out;
  }
  const auto& basis = t.domain.basis();
  double worst = 0.0;
  std::size_t wi = 0, wj = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      CMat lhs = t.apply(basis[i] * basis[j]);
      double r = op_norm(lhs - t.images[i] * t.images[j]);
      if (r > worst) {
        worst = r;
        wi = i;
        wj = j;
      }
    }
  }
  out.multiplicative_residual = worst;
  if (worst <= ctx.tol.cert_tol) {
    out.cert = Certificate::make(Verdict::Certified, "multiplicative on basis pairs");
  } else {
    out.cert = Certificate::make(Verdict::Refuted, "not multiplicative");
    out.cert.witness_kind = WitnessKind::Other;
    out.cert.witness = {basis[wi], basis[wj]};
  }
  out.cert.residual = worst;
  return out;
}

}  // namespace opalg
