#include <doctest.h>

#include <cmath>
#include <random>

#include "confgeo/errors.hpp"
#include "confgeo/pseudo_linalg.hpp"

using namespace confgeo;

TEST_CASE("inner product puts time slots first") {
  const Signature s(2, 5);
  PseudoVector e0({1, 0, 0, 0, 0}, s), e1({0, 1, 0, 0, 0}, s), e2({0, 0, 1, 0, 0}, s);
  CHECK(inner(e0, e0) == -1.0);
  CHECK(inner(e1, e1) == -1.0);
  CHECK(inner(e2, e2) == 1.0);
  CHECK(inner(e0, e2) == 0.0);
  PseudoVector null({1, 0, 1, 0, 0}, s);
  CHECK(is_lightlike(null, 1e-12));
  CHECK_FALSE(is_lightlike(e2, 1e-12));
}

TEST_CASE("mismatched signatures are rejected") {
  PseudoVector a({1, 0, 0}, Signature(1, 3)), b({1, 0, 0}, Signature(2, 3));
  CHECK_THROWS_AS(inner(a, b), DimensionError);
}

TEST_CASE("Gram-Schmidt of space-like vectors") {
  const Signature s(1, 4);
  std::vector<PseudoVector> in{PseudoVector({0.3, 1, 0.2, 0}, s), PseudoVector({0.1, 0.5, 1, 0.3}, s),
                               PseudoVector({0, 0.2, 0.1, 1}, s)};
  const auto out = gram_schmidt_spacelike(in);
  REQUIRE(out.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(inner(out[i], out[j]) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));

  std::vector<PseudoVector> bad{PseudoVector({1, 0.1, 0, 0}, s)};
  CHECK_THROWS_AS(gram_schmidt_spacelike(bad), RegularityError);
}

TEST_CASE("symmetric eigen decomposition reconstructs random matrices") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = U(rng);
    const SymEigen e = sym_eigen(SymMatrix::from_dense(m));
    const Eigen::MatrixXd back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    CHECK((back - m).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 1; i < n; ++i) CHECK(e.values(i - 1) <= e.values(i));
  }
}

TEST_CASE("2x2 eigenvalues match the closed form") {
  const double a = 0.7, b = -0.3, c = 0.4;
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, c;
  const double mid = 0.5 * (a + c), rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  const SymEigen e = sym_eigen(SymMatrix::from_dense(m));
  CHECK(e.values(0) == doctest::Approx(mid - rad).epsilon(1e-14));
  CHECK(e.values(1) == doctest::Approx(mid + rad).epsilon(1e-14));
}

TEST_CASE("eigenvalue clustering") {
  const std::vector<double> v{-0.5, -0.5 + 1e-9, 0.25, 0.25, 0.25 + 2e-9, 1.0};
  const auto c = cluster_eigenvalues(v, 1e-6);
  REQUIRE(c.size() == 3);
  CHECK(c[0].multiplicity == 2);
  CHECK(c[1].multiplicity == 3);
  CHECK(c[2].multiplicity == 1);
  CHECK(c[1].value == doctest::Approx(0.25).epsilon(1e-8));
  const auto coarse = cluster_eigenvalues(v, 1.0);
  CHECK(coarse.size() == 1);
}
