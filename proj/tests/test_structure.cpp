#include <catch_amalgamated.hpp>

#include <algorithm>

#include "opalg/linalg.hpp"
#include "opalg/structure.hpp"

using namespace opalg;

namespace {

CMat e(Eigen::Index d, Eigen::Index i, Eigen::Index j) { return matrix_unit(d, i, j); }

std::vector<std::pair<int, int>> block_multiset(const BlockStructure& bs) {
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < bs.num_blocks; ++k) {
    out.emplace_back(bs.block_dims[static_cast<std::size_t>(k)], bs.multiplicities[static_cast<std::size_t>(k)]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Subspace doubled_m2() {
  // {a ⊕ a : a ∈ M_2} in M_4.
  std::vector<CMat> gens;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) gens.push_back(e(4, i, j) + e(4, i + 2, j + 2));
  }
  return generate({4, gens, GenMode::StarAlgebra});
}

}  // namespace

TEST_CASE("commutant examples") {
  CHECK(commutant(full_algebra(3)).dim() == 1);
  CHECK(commutant(scalars(2)).dim() == 4);
  Subspace c = commutant(diagonal_algebra(2));
  CHECK(c.dim() == 2);
  CHECK(same_subspace(c, diagonal_algebra(2)));
}

TEST_CASE("wedderburn on fixed algebras") {
  BlockStructure m3 = wedderburn(full_algebra(3));
  CHECK(m3.num_blocks == 1);
  CHECK(m3.block_dims == std::vector<int>{3});
  CHECK(m3.multiplicities == std::vector<int>{1});

  Subspace b = generate({3, {e(3, 0, 1)}, GenMode::StarAlgebra});
  BlockStructure bs = wedderburn(b);
  CHECK(bs.num_blocks == 2);
  CHECK(bs.block_dims == std::vector<int>{2, 1});
  CHECK(bs.multiplicities == std::vector<int>{1, 1});
  CHECK(bs.verify(b) <= 1e-8);

  Subspace dbl = doubled_m2();
  CHECK(dbl.dim() == 4);
  BlockStructure bd = wedderburn(dbl);
  CHECK(bd.num_blocks == 1);
  CHECK(bd.block_dims == std::vector<int>{2});
  CHECK(bd.multiplicities == std::vector<int>{2});
  CHECK(bd.verify(dbl) <= 1e-8);

  BlockStructure diag = wedderburn(diagonal_algebra(4));
  CHECK(diag.num_blocks == 4);
}

TEST_CASE("wedderburn type invariants") {
  Subspace b = generate({3, {e(3, 0, 1)}, GenMode::StarAlgebra});
  BlockStructure bs = wedderburn(b);
  CMat sum = CMat::Zero(3, 3);
  int nm = 0, n2 = 0;
  for (int k = 0; k < bs.num_blocks; ++k) {
    const CMat& p = bs.central_projections[static_cast<std::size_t>(k)];
    CHECK((p * p - p).norm() < 1e-8);
    CHECK((p - p.adjoint()).norm() < 1e-8);
    CHECK(contains(b, p));
    sum += p;
    nm += bs.block_dims[static_cast<std::size_t>(k)] * bs.multiplicities[static_cast<std::size_t>(k)];
    n2 += bs.block_dims[static_cast<std::size_t>(k)] * bs.block_dims[static_cast<std::size_t>(k)];
  }
  CHECK((sum - CMat::Identity(3, 3)).norm() < 1e-8);
  CHECK(nm == 3);
  CHECK(n2 == b.dim());
  // Conjugation by W brings every element into block form.
  for (const auto& x : b.basis()) {
    CMat y = bs.basis_unitary.adjoint() * x * bs.basis_unitary;
    CHECK(y.block(0, 2, 2, 1).norm() < 1e-8);
    CHECK(y.block(2, 0, 1, 2).norm() < 1e-8);
  }
}

TEST_CASE("wedderburn is representation independent") {
  Rng rng(21);
  Subspace dbl = doubled_m2();
  auto expected = block_multiset(wedderburn(dbl));
  Subspace b3 = generate({3, {e(3, 0, 1)}, GenMode::StarAlgebra});
  auto expected3 = block_multiset(wedderburn(b3));
  for (int t = 0; t < 10; ++t) {
    Context ctx;
    ctx.seed = static_cast<std::uint64_t>(t);
    Subspace c = conjugate(dbl, random_unitary(4, rng));
    BlockStructure bs = wedderburn(c, ctx);
    CHECK(block_multiset(bs) == expected);
    CHECK(bs.verify(c) <= 1e-8);
    Subspace c3 = conjugate(b3, random_unitary(3, rng));
    CHECK(block_multiset(wedderburn(c3, ctx)) == expected3);
  }
}

TEST_CASE("random star algebras decompose consistently") {
  Rng rng(8);
  for (int t = 0; t < 8; ++t) {
    // Block-diagonal generator M_2 ⊕ M_1 ⊕ M_2 in M_5, then scrambled.
    CMat g = CMat::Zero(5, 5);
    g.block(0, 0, 2, 2) = random_gaussian(2, 2, rng);
    g(2, 2) = random_gaussian(1, 1, rng)(0, 0);
    g.block(3, 3, 2, 2) = random_gaussian(2, 2, rng);
    CMat u = random_unitary(5, rng);
    Subspace b = generate({5, {CMat(u * g * u.adjoint())}, GenMode::StarAlgebra});
    CHECK(b.dim() == 9);
    BlockStructure bs = wedderburn(b);
    CHECK(block_multiset(bs) == std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 1}});
    CHECK(bs.verify(b) <= 1e-8);
  }
}

TEST_CASE("ideals and quotient maps") {
  Subspace b = generate({3, {e(3, 0, 1)}, GenMode::StarAlgebra});
  BlockStructure bs = wedderburn(b);
  CHECK(ideal_of_blocks(bs, b, {}).dim() == 0);
  CHECK(ideal_of_blocks(bs, b, {0, 1}).dim() == 5);
  CHECK(ideal_of_blocks(bs, b, {1}).dim() == 1);

  SubspaceMap id = quotient_map(bs, b, {});
  for (const auto& x : b.basis()) CHECK((id.apply(x) - x).norm() < 1e-10);
  SubspaceMap zero = quotient_map(bs, b, {0, 1});
  for (const auto& x : b.basis()) CHECK(zero.apply(x).norm() < 1e-10);
  SubspaceMap q = quotient_map(bs, b, {1});
  CMat x = e(3, 0, 1) + 2.0 * e(3, 2, 2);
  CHECK((q.apply(x) - e(3, 0, 1)).norm() < 1e-10);
}

TEST_CASE("quotient maps are *-homomorphisms") {
  Rng rng(13);
  Subspace b = generate({5, {CMat(e(5, 0, 1) + e(5, 2, 3)), e(5, 4, 4)}, GenMode::StarAlgebra});
  BlockStructure bs = wedderburn(b);
  std::uniform_int_distribution<int> pick(0, 1);
  for (int t = 0; t < 10; ++t) {
    std::vector<int> s;
    for (int k = 0; k < bs.num_blocks; ++k) {
      if (pick(rng)) s.push_back(k);
    }
    SubspaceMap q = quotient_map(bs, b, s);
    CMat x = b.combine(random_gaussian(b.dim(), 1, rng));
    CMat y = b.combine(random_gaussian(b.dim(), 1, rng));
    CHECK((q.apply(x * y) - q.apply(x) * q.apply(y)).norm() < 1e-8);
    CHECK((q.apply(x.adjoint()) - q.apply(x).adjoint()).norm() < 1e-8);
  }
}

TEST_CASE("block representation round trip") {
  Subspace b = generate({3, {e(3, 0, 1)}, GenMode::StarAlgebra});
  BlockStructure bs = wedderburn(b);
  CMat x = e(3, 0, 1) + 3.0 * e(3, 2, 2);
  CMat r = bs.represent({0, 1}, x);
  CHECK(std::abs(op_norm(r) - op_norm(x)) < 1e-10);
  CMat rebuilt = bs.embed(0, bs.compress(0, x)) + bs.embed(1, bs.compress(1, x));
  CHECK((rebuilt - x).norm() < 1e-10);
}
