#include <catch_amalgamated.hpp>

#include "opalg/linalg.hpp"
#include "opalg/positivity.hpp"

using namespace opalg;

namespace {

CMat e(Eigen::Index d, Eigen::Index i, Eigen::Index j) { return matrix_unit(d, i, j); }

SubspaceMap transpose_map(Eigen::Index d) {
  return SubspaceMap::from_function(full_algebra(d), d, [](const CMat& x) { return CMat(x.transpose()); });
}

SubspaceMap identity_map(const Subspace& s) {
  return SubspaceMap::from_function(s, s.ambient_dim(), [](const CMat& x) { return x; });
}

// A ∈ T_2 -> diag(A, a_11) in M_3.
SubspaceMap diag_with_corner(double corner_scale) {
  return SubspaceMap::from_function(upper_triangular(2), 3, [=](const CMat& a) {
    CMat out = CMat::Zero(3, 3);
    out.topLeftCorner(2, 2) = a;
    out(2, 2) = corner_scale * a(0, 0);
    return out;
  });
}

Subspace small_system() { return span_of({CMat::Identity(2, 2), e(2, 0, 1), e(2, 1, 0)}, 2); }

}  // namespace

TEST_CASE("sdp_feasible on small problems") {
  LinearEqualities trace_one(2, {CMat::Identity(2, 2)}, {Complex(1.0)});
  Certificate c = sdp_feasible(trace_one);
  REQUIRE(c.certified());
  CHECK(std::abs(c.object.trace().real() - 1.0) < 1e-8);
  CHECK(lambda_min(c.object) >= -1e-8);

  std::vector<CMat> units;
  std::vector<Complex> rhs;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      units.push_back(e(2, i, j));
      rhs.push_back(i == j ? -1.0 : 0.0);
    }
  }
  Certificate neg = sdp_feasible(LinearEqualities(2, units, rhs));
  CHECK(neg.inconclusive());
  CHECK(neg.residual > 0.5);

  LinearEqualities corr(2, {e(2, 0, 0), e(2, 1, 1), e(2, 0, 1)}, {1.0, 1.0, 2.0});
  CHECK(sdp_feasible(corr).inconclusive());
}

TEST_CASE("herm real coordinates are isometric") {
  Rng rng(1);
  CMat h = random_hermitian(4, rng);
  RVec x = herm_to_real(h);
  CHECK(std::abs(x.norm() - h.norm()) < 1e-12);
  CHECK((real_to_herm(x, 4) - h).norm() < 1e-12);
}

TEST_CASE("cp_extendable on full matrix algebras") {
  Certificate id = cp_extendable(identity_map(full_algebra(2)));
  REQUIRE(id.certified());
  HermEig ce = herm_eig(id.object);
  CHECK(std::abs(ce.values(3) - 2.0) < 1e-10);
  CHECK(std::abs(ce.values(2)) < 1e-10);

  SubspaceMap tr = transpose_map(2);
  Certificate t = cp_extendable(tr);
  REQUIRE(t.refuted());
  CHECK(t.witness_kind == WitnessKind::Positivity);
  PositivityCheck chk = check_positivity_witness(tr, t.witness, t.level);
  CHECK(chk.input_lambda_min >= -1e-12);
  CHECK(std::abs(chk.image_lambda_min + 1.0) < 1e-10);
  CHECK(witness_violation(tr, t) > 0.25);

  SubspaceMap corner = SubspaceMap::from_function(full_algebra(2), 1, [](const CMat& x) {
    return CMat::Constant(1, 1, x(0, 0));
  });
  CHECK(cp_extendable(corner).certified());
}

TEST_CASE("cp_extendable on a proper operator system") {
  Subspace s = small_system();
  Certificate inc = cp_extendable(identity_map(s));
  REQUIRE(inc.certified());
  // The certificate reproduces T on S.
  ChoiConstraint cons(identity_map(s));
  CHECK(cons.defect(inc.object).norm() <= 1e-7);
  CHECK(lambda_min(inc.object) >= -1e-8);

  // Doubling the off-diagonal part is not even positive.
  SubspaceMap dbl = SubspaceMap::from_function(s, 2, [](const CMat& x) {
    CMat y = x;
    y(0, 1) *= 2.0;
    y(1, 0) *= 2.0;
    return y;
  });
  Certificate r = cp_extendable(dbl);
  REQUIRE(r.refuted());
  CHECK(witness_violation(dbl, r) > 1e-8 / 2);

  // Halving it is CP (Schur multiplier with a PSD kernel).
  SubspaceMap half = SubspaceMap::from_function(s, 2, [](const CMat& x) {
    CMat y = x;
    y(0, 1) *= 0.5;
    y(1, 0) *= 0.5;
    return y;
  });
  CHECK(cp_extendable(half).certified());
}

TEST_CASE("cp_extendable rejects maps that are not *-linear") {
  Subspace s = small_system();
  SubspaceMap skew = SubspaceMap::from_function(s, 2, [](const CMat& x) {
    CMat y = x;
    y(0, 1) *= Complex(0, 1);
    return y;
  });
  CHECK_THROWS_AS(cp_extendable(skew), InvalidInput);
  SubspaceMap on_t2 = identity_map(upper_triangular(2));
  CHECK_THROWS_AS(cp_extendable(on_t2), InvalidInput);
}

TEST_CASE("level_k_isometric") {
  Rng rng(2);
  CMat u = random_unitary(2, rng);
  SubspaceMap conj = SubspaceMap::from_function(full_algebra(2), 2, [&](const CMat& x) {
    return CMat(u * x * u.adjoint());
  });
  for (int k = 1; k <= 3; ++k) CHECK(level_k_isometric(conj, k, 100).certified());

  SubspaceMap half = SubspaceMap::from_function(full_algebra(2), 2, [](const CMat& x) { return CMat(0.5 * x); });
  Certificate h = level_k_isometric(half, 1, 10);
  REQUIRE(h.refuted());
  CHECK(std::abs(h.residual + 0.5) < 1e-12);

  SubspaceMap diag = SubspaceMap::from_function(upper_triangular(2), 2, [](const CMat& x) {
    return CMat(x.diagonal().asDiagonal());
  });
  Certificate dg = level_k_isometric(diag, 1, 10);
  REQUIRE(dg.refuted());
  CHECK(witness_violation(diag, dg) > 1e-8);
}

TEST_CASE("complete_isometry on fixed maps") {
  SubspaceMap inc = identity_map(upper_triangular(2));
  inc.unital = true;
  CHECK(complete_isometry(inc).certified());

  SubspaceMap phi = diag_with_corner(1.0);
  REQUIRE(phi.unital);
  Certificate c = complete_isometry(phi);
  CHECK(c.certified());
  for (int k = 1; k <= 3; ++k) CHECK(level_k_isometric(phi, k, 200).certified());

  SubspaceMap half = SubspaceMap::from_function(full_algebra(2), 2, [](const CMat& x) { return CMat(0.5 * x); });
  Certificate h = complete_isometry(half);
  REQUIRE(h.refuted());
  CHECK(witness_violation(half, h) > 0.4);
}

TEST_CASE("complete_isometry through the Paulsen system") {
  // A non-unital isometry: A -> W diag(A, a_11) W' with unitaries W, W'.
  Rng rng(6);
  CMat w = random_unitary(3, rng);
  CMat w2 = random_unitary(3, rng);
  SubspaceMap phi = sandwich(w, diag_with_corner(1.0), w2);
  REQUIRE_FALSE(phi.unital);
  Certificate c = complete_isometry(phi);
  CHECK(c.certified());
  CHECK(c.subject == "paulsen");

  SubspaceMap shrink = sandwich(w, diag_with_corner(1.0), CMat(0.9 * w2));
  Certificate r = complete_isometry(shrink);
  REQUIRE(r.refuted());
  CHECK(witness_violation(shrink, r) > 1e-8 / 2);
}

TEST_CASE("complete_isometry is conjugation invariant") {
  Rng rng(12);
  for (int t = 0; t < 3; ++t) {
    CMat u = random_unitary(3, rng);
    SubspaceMap phi = diag_with_corner(1.0);
    SubspaceMap conj = sandwich(u, phi, u.adjoint());
    conj.unital = true;
    CHECK(complete_isometry(conj).certified());
    SubspaceMap bad = sandwich(u, diag_with_corner(2.0), u.adjoint());
    bad.unital = true;
    Certificate r = complete_isometry(bad);
    CHECK(r.refuted());
  }
}

TEST_CASE("kernel witnesses") {
  SubspaceMap zero = SubspaceMap::from_function(upper_triangular(2), 2, [](const CMat& x) {
    CMat y = x;
    y(0, 1) = 0.0;
    return y;
  });
  Certificate c = complete_isometry(zero);
  REQUIRE(c.refuted());
  CHECK(c.witness_kind == WitnessKind::Kernel);
  CHECK(witness_violation(zero, c) > 0.99);
}
