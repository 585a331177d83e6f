#include <catch_amalgamated.hpp>

#include "opalg/linalg.hpp"

using namespace opalg;
using Catch::Matchers::WithinAbs;

namespace {

CMat mat2(Complex a, Complex b, Complex c, Complex d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("op_norm of basic matrices") {
  CHECK_THAT(op_norm(CMat::Identity(3, 3)), WithinAbs(1.0, 1e-14));
  CHECK_THAT(op_norm(matrix_unit(2, 0, 1)), WithinAbs(1.0, 1e-14));
  CHECK_THAT(op_norm(mat2(1, 1, 1, 1)), WithinAbs(2.0, 1e-14));
  CHECK(op_norm(CMat(0, 0)) == 0.0);
}

TEST_CASE("herm_eig sorts eigenvalues and rejects non-Hermitian input") {
  HermEig e = herm_eig(mat2(2, 0, 0, 1));
  CHECK_THAT(e.values(0), WithinAbs(1.0, 1e-14));
  CHECK_THAT(e.values(1), WithinAbs(2.0, 1e-14));
  CHECK_THAT(std::abs(e.vectors(1, 0)), WithinAbs(1.0, 1e-14));

  HermEig swap = herm_eig(mat2(0, 1, 1, 0));
  CHECK_THAT(swap.values(0), WithinAbs(-1.0, 1e-14));
  CHECK_THAT(swap.values(1), WithinAbs(1.0, 1e-14));

  HermEig z = herm_eig(CMat::Zero(3, 3));
  CHECK(z.values.isZero());
  CHECK(z.vectors.isIdentity());

  CHECK_THROWS_AS(herm_eig(matrix_unit(2, 0, 1)), InvalidInput);
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    CMat h = random_hermitian(5, rng);
    HermEig e = herm_eig(h);
    CMat back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    CHECK((back - h).norm() <= 1e-12 * h.norm());
    for (int i = 0; i + 1 < 5; ++i) CHECK(e.values(i) <= e.values(i + 1));
  }
}

TEST_CASE("cholesky, polar and qr on fixed inputs") {
  CMat r = cholesky_upper(mat2(1, 1, 1, 2));
  CHECK((r - mat2(1, 1, 0, 1)).norm() < 1e-14);

  Polar p = polar(mat2(0, 1, 1, 0));
  CHECK((p.unitary - mat2(0, 1, 1, 0)).norm() < 1e-14);
  CHECK((p.modulus - CMat::Identity(2, 2)).norm() < 1e-14);

  Qr q = qr(CMat::Identity(3, 3));
  CHECK((q.q - CMat::Identity(3, 3)).norm() < 1e-14);
  CHECK((q.r - CMat::Identity(3, 3)).norm() < 1e-14);

  CHECK_THROWS_AS(cholesky_upper(mat2(1, 0, 0, 0)), NotStrictlyPositive);
  CHECK_THROWS_AS(cholesky_upper(mat2(1, 2, 2, 1)), DegenerateInput);
}

TEST_CASE("norm invariance under unitaries and adjoints") {
  Rng rng(11);
  for (int t = 0; t < 25; ++t) {
    CMat m = random_gaussian(4, 4, rng);
    CMat u = random_unitary(4, rng);
    CMat v = random_unitary(4, rng);
    double n = op_norm(m);
    CHECK(std::abs(op_norm(m.adjoint()) - n) <= 1e-10 * n);
    CHECK(std::abs(op_norm(u * m * v) - n) <= 1e-10 * n);
  }
}

TEST_CASE("factorizations reproduce random inputs") {
  Rng rng(3);
  for (int t = 0; t < 25; ++t) {
    CMat m = random_gaussian(4, 4, rng);
    double n = m.norm();
    Qr f = qr(m);
    CHECK((m - f.q * f.r).norm() <= 1e-10 * n);
    CHECK((f.q.adjoint() * f.q - CMat::Identity(4, 4)).norm() <= 1e-12);
    for (int i = 0; i < 4; ++i) {
      CHECK(f.r(i, i).real() >= 0.0);
      CHECK(std::abs(f.r(i, i).imag()) < 1e-14);
      for (int j = 0; j < i; ++j) CHECK(f.r(i, j) == Complex(0.0));
    }
    Polar pl = polar(m);
    CHECK((m - pl.unitary * pl.modulus).norm() <= 1e-10 * n);

    CMat b = m.adjoint() * m + 0.1 * CMat::Identity(4, 4);
    CMat r = cholesky_upper(b);
    CHECK((r.adjoint() * r - b).norm() <= 1e-10 * b.norm());
    for (int i = 0; i < 4; ++i) CHECK(r(i, i).real() > 0.0);
    CHECK(r.isUpperTriangular());
  }
}

TEST_CASE("amplify assembles block matrices") {
  Rng rng(5);
  CMat a = random_gaussian(3, 3, rng);
  CMat z = CMat::Zero(3, 3);
  CHECK((amplify({{a}}) - a).norm() == 0.0);
  CHECK_THAT(op_norm(amplify({{a, z}, {z, a}})), WithinAbs(op_norm(a), 1e-12));
  CHECK_THAT(op_norm(amplify({{z, a}, {z, z}})), WithinAbs(op_norm(a), 1e-12));
  CMat b = 3.0 * random_gaussian(3, 3, rng);
  CHECK_THAT(op_norm(amplify({{a, z}, {z, b}})),
             WithinAbs(std::max(op_norm(a), op_norm(b)), 1e-12));
  CHECK_THROWS_AS(amplify({{a, z}, {z}}), InvalidInput);
  CHECK_THROWS_AS(amplify({{a, CMat::Zero(2, 2)}}), InvalidInput);
}

TEST_CASE("null and column spaces") {
  CMat m(2, 3);
  m << 1, 0, 1, 0, 1, 1;
  CMat k = null_space(m, 1e-9);
  REQUIRE(k.cols() == 1);
  CHECK((m * k).norm() < 1e-12);
  CHECK(column_space(m, 1e-9).cols() == 2);
  CMat p = range_projection(CMat(mat2(1, 0, 0, 0)), 1e-9);
  CHECK((p - mat2(1, 0, 0, 0)).norm() < 1e-14);
  CMat v = CMat::Identity(3, 1);
  CHECK(orthogonal_complement(v, 3).cols() == 2);
}

TEST_CASE("derive_seed separates tags") {
  CHECK(derive_seed(0, "a") != derive_seed(0, "b"));
  CHECK(derive_seed(0, "a") == derive_seed(0, "a"));
  CHECK(derive_seed(1, 5) != derive_seed(2, 5));
}
