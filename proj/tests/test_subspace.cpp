#include <catch_amalgamated.hpp>

#include "opalg/linalg.hpp"
#include "opalg/subspace.hpp"

using namespace opalg;

namespace {

CMat e(Eigen::Index d, Eigen::Index i, Eigen::Index j) { return matrix_unit(d, i, j); }

void check_orthonormal(const Subspace& s) {
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    for (Eigen::Index j = 0; j < s.dim(); ++j) {
      Complex ip = hs_inner(s.basis_element(i), s.basis_element(j));
      CHECK(std::abs(ip - Complex(i == j ? 1.0 : 0.0)) < 1e-10);
    }
  }
}

}  // namespace

TEST_CASE("span_of dimensions") {
  CMat i2 = CMat::Identity(2, 2);
  CHECK(span_of({i2, 2.0 * i2}, 2).dim() == 1);
  CHECK(span_of({i2, e(2, 0, 1)}, 2).dim() == 2);
  CHECK(span_of({}, 2).dim() == 0);

  Rng rng(1);
  std::vector<CMat> many;
  CMat coeff(4, 10);
  for (int k = 0; k < 10; ++k) {
    many.push_back(random_gaussian(2, 2, rng));
    coeff.col(k) = vectorize(many.back());
  }
  Subspace s = span_of(many, 2);
  Eigen::FullPivLU<CMat> lu(coeff);
  CHECK(s.dim() == lu.rank());
  CHECK(s.dim() == 4);
  check_orthonormal(s);
}

TEST_CASE("generate closes under the requested operations") {
  Subspace m2 = generate({2, {e(2, 0, 1)}, GenMode::StarAlgebra});
  CHECK(m2.dim() == 4);

  Subspace b = generate({3, {e(3, 0, 1)}, GenMode::StarAlgebra});
  CHECK(b.dim() == 5);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}}) {
    CHECK(contains(b, e(3, i, j)));
  }
  CHECK_FALSE(contains(b, e(3, 0, 2)));

  // E_12 and E_23 with the identity only reach span{I, E_12, E_23, E_13}.
  Subspace nil = generate({3, {e(3, 0, 1), e(3, 1, 2), CMat::Identity(3, 3)}, GenMode::Algebra});
  CHECK(nil.dim() == 4);
  CHECK(contains(nil, e(3, 0, 2)));
  CHECK_FALSE(contains(nil, e(3, 0, 0)));

  Subspace t3 = generate({3, {e(3, 0, 0), e(3, 1, 1), e(3, 0, 1), e(3, 1, 2)}, GenMode::Algebra});
  CHECK(t3.dim() == 6);
  CHECK(same_subspace(t3, upper_triangular(3)));
  REQUIRE(t3.nest.has_value());
  CHECK(t3.nest->block_sizes == std::vector<int>{1, 1, 1});

  Subspace os = generate({2, {e(2, 0, 1)}, GenMode::OperatorSystem});
  CHECK(os.dim() == 3);
  CHECK(check_selfadjoint(os));

  Subspace tr = generate({2, {e(2, 0, 1)}, GenMode::TripleSystem});
  CHECK(tr.dim() == 1);
  CHECK(check_triple_system(tr));
}

TEST_CASE("generate is idempotent and flags re-verify") {
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    CMat g = random_gaussian(3, 3, rng);
    g.row(2).setZero();
    g.col(2).setZero();
    for (GenMode mode : {GenMode::Algebra, GenMode::StarAlgebra, GenMode::TripleSystem}) {
      Subspace s = generate({3, {g}, mode});
      check_orthonormal(s);
      Subspace again = generate({3, s.basis(), mode});
      CHECK(same_subspace(s, again));
      if (s.flags.unital) CHECK(check_unital(s));
      if (s.flags.algebra) CHECK(check_algebra(s));
      if (s.flags.selfadjoint) CHECK(check_selfadjoint(s));
      if (s.flags.triple_system) CHECK(check_triple_system(s));
    }
  }
}

TEST_CASE("diagonal part and membership") {
  Subspace t3 = upper_triangular(3);
  Subspace d = diag_part(t3);
  CHECK(d.dim() == 3);
  CHECK(same_subspace(d, diagonal_algebra(3)));
  CHECK(check_algebra(d));
  CHECK(check_selfadjoint(d));
  CHECK(diag_part(full_algebra(2)).dim() == 4);
  CHECK_FALSE(contains(upper_triangular(2), e(2, 1, 0)));
  CHECK(contains(upper_triangular(2), e(2, 0, 1)));
}

TEST_CASE("diagonal part of conjugated and random algebras") {
  Rng rng(9);
  CMat w = random_unitary(4, rng);
  Subspace a = conjugate(block_upper_triangular({2, 2}), w);
  Subspace d = diag_part(a);
  CHECK(d.dim() == 8);
  CHECK(d.dim() <= a.dim());
  CHECK(check_algebra(d));
  CHECK(check_selfadjoint(d));
  REQUIRE(a.nest.has_value());
  CHECK((a.nest->unitary - w).norm() < 1e-12);
}

TEST_CASE("is_dirichlet") {
  for (int n = 2; n <= 4; ++n) CHECK(is_dirichlet(upper_triangular(n), full_algebra(n)));
  CHECK_FALSE(is_dirichlet(diagonal_algebra(2), full_algebra(2)));
  CHECK(is_dirichlet(full_algebra(2), full_algebra(2)));
  CHECK_THROWS_AS(is_dirichlet(full_algebra(2), diagonal_algebra(2)), InvalidInput);
}

TEST_CASE("intersection is symmetric") {
  Subspace a = upper_triangular(3);
  Subspace b = adjoint(block_upper_triangular({1, 2}));
  Subspace ab = intersection(a, b);
  Subspace ba = intersection(b, a);
  CHECK(same_subspace(ab, ba));
  // Upper triangular ∩ lower block pattern {1,2}: diagonal plus E_23.
  CHECK(ab.dim() == 4);
}

TEST_CASE("nest detection") {
  auto sizes = detect_nest(block_upper_triangular({2, 1}));
  REQUIRE(sizes.has_value());
  CHECK(*sizes == std::vector<int>{2, 1});
  CHECK_FALSE(detect_nest(diagonal_algebra(3)).has_value());
  CHECK(*detect_nest(full_algebra(3)) == std::vector<int>{3});
}

TEST_CASE("subspace distance") {
  Rng rng(4);
  Subspace a = upper_triangular(3);
  CHECK(subspace_distance(a, a) < 1e-14);
  CMat u = random_unitary(3, rng);
  Subspace c = conjugate(a, u);
  // Same subspace from a different basis stays at roundoff, not sqrt(eps).
  Subspace back = conjugate(c, CMat(u.adjoint()));
  CHECK(subspace_distance(a, back) < 1e-13);
  CHECK(subspace_distance(a, c) > 1e-3);
  CHECK(subspace_distance(a, full_algebra(3)) == 1.0);
}

TEST_CASE("mode names round trip") {
  for (GenMode m : {GenMode::Algebra, GenMode::StarAlgebra, GenMode::TripleSystem,
                    GenMode::OperatorSystem}) {
    CHECK(gen_mode_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(gen_mode_from_string("ring"), InvalidInput);
}

TEST_CASE("closure checks survive a change of basis") {
  Rng rng(17);
  for (int s = 0; s < 5; ++s) {
    CMat w = random_unitary(4, rng);
    Subspace a = span_of(conjugate(upper_triangular(4), w).basis(), 4);
    CHECK(check_algebra(a));
    CHECK(check_triple_system(span_of(conjugate(full_algebra(3), random_unitary(3, rng)).basis(), 3)));
  }
}

TEST_CASE("block diagonal algebras") {
  Subspace m = block_diagonal_algebra({2, 1, 3});
  CHECK(m.ambient_dim() == 6);
  CHECK(m.dim() == 4 + 1 + 9);
  CHECK(check_algebra(m));
  CHECK(check_selfadjoint(m));
  CHECK(check_unital(m));
  CHECK(!contains(m, matrix_unit(6, 1, 2)));
}
