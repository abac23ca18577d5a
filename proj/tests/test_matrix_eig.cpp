#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "afembed/eig.hpp"
#include "support.hpp"

using namespace afembed;
using testsupport::Rng;

TEST_CASE("eigendecomposition of a known 2x2 Hermitian matrix") {
  Mat a(2, 2);
  a.at(0, 0) = 2.0;
  a.at(1, 1) = 2.0;
  a.at(0, 1) = cplx(0.0, 1.0);
  a.at(1, 0) = cplx(0.0, -1.0);
  SpectralDecomposition s = hermitian_eig(a);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("random Hermitian matrices are reconstructed exactly") {
  Rng rng(7);
  for (int n = 1; n <= 12; ++n) {
    const Mat a = testsupport::random_hermitian(rng, n, 2.0);
    SpectralDecomposition s = hermitian_eig(a);

    Mat d(n, n);
    for (int i = 0; i < n; ++i) d.at(i, i) = s.eigenvalues[i];
    const Mat back = s.vectors * d * s.vectors.adjoint();
    CHECK(testsupport::dist_op(back, a) <= 1e-12 * std::max(1.0, a.frob_norm()));

    const Mat gram = s.vectors.adjoint() * s.vectors;
    CHECK(testsupport::dist_op(gram, Mat::identity(n)) <= 1e-12);

    for (int i = 0; i + 1 < n; ++i) CHECK(s.eigenvalues[i] <= s.eigenvalues[i + 1]);
  }
}

TEST_CASE("eigendecomposition is deterministic") {
  Rng rng(11);
  const Mat a = testsupport::random_hermitian(rng, 9);
  SpectralDecomposition s1 = hermitian_eig(a);
  SpectralDecomposition s2 = hermitian_eig(a);
  for (int i = 0; i < 9; ++i) CHECK(s1.eigenvalues[i] == s2.eigenvalues[i]);
  CHECK((s1.vectors - s2.vectors).max_abs() == 0.0);
}

TEST_CASE("functional calculus reproduces identity and square root") {
  Rng rng(3);
  const Mat a = testsupport::random_hermitian(rng, 8);
  const Mat same = func_calc(a, [](double t) { return t; });
  CHECK(testsupport::dist_op(same, a) <= 1e-12 * std::max(1.0, a.frob_norm()));

  const Mat pos = a * a;  // positive semidefinite
  const Mat root = func_calc(pos, [](double t) { return std::sqrt(std::max(0.0, t)); });
  CHECK(testsupport::dist_op(root * root, pos) <= 1e-10 * std::max(1.0, pos.frob_norm()));
}

TEST_CASE("operator norm matches known values") {
  Mat d(3, 3);
  d.at(0, 0) = 1.0;
  d.at(1, 1) = -4.0;
  d.at(2, 2) = 2.0;
  CHECK(operator_norm(d) == doctest::Approx(4.0).epsilon(1e-12));

  // Rank one: norm is the product of the vector lengths.
  Mat u(3, 1), v(2, 1);
  u.at(0, 0) = 3.0;
  u.at(1, 0) = 4.0;
  v.at(0, 0) = cplx(0.0, 2.0);
  const Mat r1 = u * v.adjoint();
  CHECK(operator_norm(r1) == doctest::Approx(10.0).epsilon(1e-12));

  Rng rng(5);
  const Mat g = testsupport::random_gaussian(rng, 6, 9);
  const double nrm = operator_norm(g);
  CHECK(nrm <= g.frob_norm() + 1e-12);
  CHECK(nrm >= g.frob_norm() / std::sqrt(6.0) - 1e-12);
  CHECK(operator_norm(g.adjoint()) == doctest::Approx(nrm).epsilon(1e-10));
}

TEST_CASE("non-Hermitian input is rejected") {
  Mat a(2, 2);
  a.at(0, 1) = 5.0;
  CHECK_THROWS_AS(hermitian_eig(a), Error);
}

TEST_CASE("block matrices multiply blockwise and take the max norm") {
  Rng rng(13);
  const std::vector<int> dims{2, 3};
  const BlockMatrix x = testsupport::random_block(rng, dims);
  const BlockMatrix y = testsupport::random_block(rng, dims);
  const BlockMatrix z = x * y;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    CHECK(testsupport::dist_op(z.block(k), x.block(k) * y.block(k)) == 0.0);
  }
  CHECK(z.op_norm() ==
        doctest::Approx(std::max(operator_norm(z.block(0)), operator_norm(z.block(1)))));

  const Mat dense = x.to_dense();
  const BlockMatrix back = BlockMatrix::from_dense(dims, dense, 1e-14);
  CHECK(testsupport::dist_op(back, x) == 0.0);
}
