#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "afembed/algebra.hpp"
#include "afembed/error.hpp"
#include "afembed/qdcert.hpp"
#include "support.hpp"

using namespace afembed;
using testsupport::Rng;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

Mat shift_matrix(int d) {
  Mat s(d, d);
  for (int i = 0; i + 1 < d; ++i) s.at(i + 1, i) = 1.0;
  return s;
}

Mat coordinate_basis(int d, const std::vector<int>& coords) {
  Mat b(d, static_cast<int>(coords.size()));
  for (std::size_t c = 0; c < coords.size(); ++c) {
    b.at(coords[c], static_cast<int>(c)) = 1.0;
  }
  return b;
}

Mat prefix_basis(int d, int m) {
  std::vector<int> coords;
  for (int i = 0; i < m; ++i) coords.push_back(i);
  return coordinate_basis(d, coords);
}

Mat diag_matrix(const std::vector<double>& values) {
  Mat m(static_cast<int>(values.size()), static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    m.at(static_cast<int>(i), static_cast<int>(i)) = values[i];
  }
  return m;
}

double direct_commutator(const Mat& x, const Mat& p) {
  return operator_norm(x * p - p * x);
}

}  // namespace

TEST_CASE("truncated shift against a coordinate prefix: the rank-one commutator") {
  const int d = 32;
  const Mat s = shift_matrix(d);
  const QdCertificate cert = certify({s}, prefix_basis(d, 16));

  CHECK(cert.ambient_dim == 32);
  CHECK(cert.subspace_dim == 16);
  REQUIRE(cert.per_element.size() == 1);
  CHECK(cert.per_element[0].norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cert.per_element[0].compression_norm == doctest::Approx(1.0).epsilon(1e-12));
  // SP - PS is exactly the rank-one e_17 e_16*
  CHECK(std::abs(cert.per_element[0].commutator_norm - 1.0) < 1e-10);
  CHECK(std::abs(cert.epsilon_achieved - 1.0) < 1e-10);

  // projection invariants
  const Mat& p = cert.projection;
  CHECK(operator_norm(p * p - p) < 1e-10);
  CHECK(p.is_hermitian(1e-10));
  double tr = 0.0;
  for (int i = 0; i < d; ++i) tr += p.at(i, i).real();
  CHECK(tr == doctest::Approx(16.0).epsilon(1e-10));
}

TEST_CASE("coordinate prefixes of the shift enforce the compression floor") {
  const int d = 12;
  const Mat s = shift_matrix(d);
  for (int m = 2; m < d; ++m) {
    const QdCertificate cert = certify({s}, prefix_basis(d, m));
    // compression norm stays at the full norm, the commutator carries all of
    // the obstruction
    CHECK(cert.per_element[0].compression_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cert.per_element[0].commutator_norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(cert.epsilon_achieved == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("full space always certifies epsilon zero") {
  Rng rng(3);
  const int d = 7;
  std::vector<Mat> elements;
  for (int k = 0; k < 3; ++k) elements.push_back(testsupport::random_gaussian(rng, d, d));
  const QdCertificate cert = certify(elements, Mat::identity(d));
  CHECK(cert.subspace_dim == d);
  CHECK(cert.epsilon_achieved < 1e-10);
  for (const auto& r : cert.per_element) {
    CHECK(r.commutator_norm < 1e-12);
    CHECK(r.compression_norm == doctest::Approx(r.norm).epsilon(1e-12));
  }
}

TEST_CASE("certificate arithmetic on a diagonal example") {
  const Mat x = diag_matrix({3, 2, 1, 0});

  const QdCertificate top = certify({x}, coordinate_basis(4, {0, 1}));
  CHECK(top.epsilon_achieved < 1e-12);
  CHECK(top.per_element[0].compression_norm == doctest::Approx(3.0));

  const QdCertificate bottom = certify({x}, coordinate_basis(4, {2, 3}));
  CHECK(bottom.per_element[0].compression_norm == doctest::Approx(1.0));
  CHECK(bottom.per_element[0].commutator_norm < 1e-12);
  CHECK(bottom.epsilon_achieved == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("certify orthonormalizes a raw basis and rejects degenerate ones") {
  Rng rng(5);
  const int d = 6;
  const Mat x = testsupport::random_hermitian(rng, d);

  // skewed but full-rank basis
  Mat raw(d, 2);
  raw.at(0, 0) = 2.0;
  raw.at(1, 0) = 1.0;
  raw.at(0, 1) = 2.0;
  raw.at(1, 1) = 1.0 + 1e-3;
  raw.at(2, 1) = 0.5;
  const QdCertificate cert = certify({x}, raw);
  const Mat& p = cert.projection;
  CHECK(operator_norm(p * p - p) < 1e-10);
  CHECK(p.is_hermitian(1e-10));
  CHECK(cert.per_element[0].commutator_norm ==
        doctest::Approx(direct_commutator(x, p)).epsilon(1e-10));
  CHECK(cert.per_element[0].compression_norm <= cert.per_element[0].norm + 1e-10);

  // exactly repeated column
  Mat degenerate(d, 2);
  degenerate.at(0, 0) = 1.0;
  degenerate.at(0, 1) = 1.0;
  CHECK(code_of([&] { certify({x}, degenerate); }) == ErrorCode::DegenerateSubspace);

  CHECK(code_of([&] { certify({}, prefix_basis(d, 2)); }) == ErrorCode::EmptyFamily);
  CHECK(code_of([&] { certify({Mat::identity(3)}, prefix_basis(d, 2)); }) ==
        ErrorCode::ShapeMismatch);
}

TEST_CASE("hermitian near-invariance turns into a commutator bound") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 6 + trial % 3;
    const int m = 2 + trial % 3;
    const Mat t = testsupport::random_hermitian(rng, d);
    const Mat u = testsupport::random_unitary(rng, d);
    Mat q(d, m);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < m; ++j) q.at(i, j) = u.at(i, j);
    }
    const Mat compr_t = q.adjoint() * t * q;
    const Mat compr_tt = q.adjoint() * (t * t) * q;
    const double delta = operator_norm(compr_tt - compr_t * compr_t);

    const QdCertificate cert = certify({t}, q);
    CHECK(cert.per_element[0].commutator_norm <= std::sqrt(delta) + 1e-8);
  }
}

TEST_CASE("commutators vanish along joint eigenvector chains") {
  Rng rng(11);
  const int d = 8;
  const Mat u = testsupport::random_unitary(rng, d);
  // commuting normal family: common eigenvectors, diagonal in the u frame
  std::vector<Mat> elements;
  elements.push_back(u * diag_matrix({5, 4, 3, 2, 1, 1, 0, 0}) * u.adjoint());
  elements.push_back(u * diag_matrix({1, 1, 2, 2, 3, 3, 4, 4}) * u.adjoint());

  double previous = 2.0;
  for (int m = 2; m <= d; m += 2) {
    Mat basis(d, m);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < m; ++j) basis.at(i, j) = u.at(i, j);
    }
    const QdCertificate cert = certify(elements, basis);
    double comm = 0.0;
    for (const auto& r : cert.per_element) comm = std::max(comm, r.commutator_norm);
    CHECK(comm < 1e-10);
    CHECK(comm <= previous + 1e-12);  // non-increasing along the nested chain
    previous = comm;
  }
}

TEST_CASE("search finds invariant subspaces of a single hermitian element") {
  Rng rng(13);
  const Mat h = testsupport::random_hermitian(rng, 8);
  const QdCertificate cert = search_subspace({h}, 3, 200);
  CHECK(cert.subspace_dim <= 3);
  CHECK(cert.epsilon_achieved <= 1e-8);
}

TEST_CASE("search solves commuting diagonal families within budget") {
  const Mat a = diag_matrix({5, 1, 0, 2, 0, 1, 0, 0, 1, 2});
  const Mat b = diag_matrix({0, 3, 0, 0, 7, 0, 1, 1, 0, 0});
  const Mat c = diag_matrix({1, 0, 2, 0, 0, 6, 0, 0, 1, 1});
  const QdCertificate cert = search_subspace({a, b, c}, 4, 1000);
  CHECK(cert.epsilon_achieved <= 1e-6);
  for (const auto& r : cert.per_element) {
    CHECK(r.commutator_norm <= 1e-8);
    CHECK(r.compression_norm >= r.norm - 1e-8);
  }
}

TEST_CASE("search never loses to a coordinate subspace of admissible size") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 5;
    std::vector<Mat> elements;
    elements.push_back(testsupport::random_gaussian(rng, d, d));
    elements.push_back(testsupport::random_hermitian(rng, d));

    double best_coordinate = 1e300;
    for (int mask = 1; mask < (1 << d); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) > 2) continue;
      std::vector<int> coords;
      for (int i = 0; i < d; ++i) {
        if (mask & (1 << i)) coords.push_back(i);
      }
      const QdCertificate cert = certify(elements, coordinate_basis(d, coords));
      best_coordinate = std::min(best_coordinate, cert.epsilon_achieved);
    }

    const QdCertificate found = search_subspace(elements, 2, 1000);
    CHECK(found.epsilon_achieved <= best_coordinate + 1e-12);
  }
}

TEST_CASE("search is deterministic under a fixed seed") {
  Rng rng(19);
  std::vector<Mat> elements{testsupport::random_gaussian(rng, 6, 6),
                            testsupport::random_gaussian(rng, 6, 6)};
  const QdCertificate first = search_subspace(elements, 3, 150, 42);
  const QdCertificate second = search_subspace(elements, 3, 150, 42);
  CHECK(first.epsilon_achieved == second.epsilon_achieved);
  CHECK(first.subspace_dim == second.subspace_dim);
  CHECK(operator_norm(first.projection - second.projection) == 0.0);

  // the shift with a capped dimension cannot beat the prefix certificates
  const Mat s = shift_matrix(16);
  const QdCertificate shifted = search_subspace({s}, 8, 300);
  CHECK(shifted.epsilon_achieved <= 1.0 + 1e-12);
}

TEST_CASE("direct sums of representations separate what single ones miss") {
  // two characters of C + C, each killing one summand
  const FdAlgebra source(DimensionVector({1, 1}));
  const FdAlgebra target(DimensionVector({1}));
  const RealizedMorphism first =
      realize(MappingMatrix::from_rows({{1, 0}}), source, target);
  const RealizedMorphism second =
      realize(MappingMatrix::from_rows({{0, 1}}), source, target);

  BlockMatrix x({1, 1}), y({1, 1});
  x.block(0).at(0, 0) = 1.0;  // supported on the first summand
  y.block(1).at(0, 0) = 1.0;  // on the second

  const RfdSumResult both = rfd_sum({first, second}, 2, {x, y});
  CHECK(both.direct_sum.target.realized_dims() == std::vector<int>{1, 1});
  REQUIRE(both.separation.size() == 2);
  for (const auto& s : both.separation) {
    CHECK(s.norm == doctest::Approx(1.0));
    CHECK(s.image_norm == doctest::Approx(1.0));  // the sum separates
    REQUIRE(s.per_rep.size() == 2);
  }
  // each representation alone kills one of the samples
  CHECK(both.separation[0].per_rep[0] == doctest::Approx(1.0));
  CHECK(both.separation[0].per_rep[1] == doctest::Approx(0.0));
  CHECK(both.separation[1].per_rep[0] == doctest::Approx(0.0));
  CHECK(both.separation[1].per_rep[1] == doctest::Approx(1.0));

  // truncating to the first representation loses the second sample
  const RfdSumResult lone = rfd_sum({first, second}, 1, {x, y});
  CHECK(lone.separation[0].image_norm == doctest::Approx(1.0));
  CHECK(lone.separation[1].image_norm == doctest::Approx(0.0));

  CHECK(code_of([&] { rfd_sum({first, second}, 0, {x}); }) == ErrorCode::EmptyFamily);
  CHECK(code_of([&] { rfd_sum({first, second}, 3, {x}); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("a faithful representation has separation ratio one") {
  Rng rng(23);
  const FdAlgebra source(DimensionVector({2}));
  const RealizedMorphism id2 =
      realize(MappingMatrix::from_rows({{1}}), source, source);
  std::vector<BlockMatrix> samples;
  for (int k = 0; k < 4; ++k) samples.push_back(testsupport::random_block(rng, {2}));
  const RfdSumResult res = rfd_sum({id2}, 1, samples);
  for (const auto& s : res.separation) {
    CHECK(s.image_norm == doctest::Approx(s.norm).epsilon(1e-12));
    CHECK(s.per_rep[0] == doctest::Approx(s.norm).epsilon(1e-12));
  }

  // a relation-violating rep is refused
  RealizedMorphism broken = id2;
  broken.units.unit(0, 0, 1) = 1.1 * broken.units.unit(0, 0, 1);
  CHECK(code_of([&] { rfd_sum({broken}, 1, samples); }) == ErrorCode::NotAMorphism);
}

TEST_CASE("no finite matrix is a proper isometry") {
  Rng rng(29);

  const IsometryReport shift = proper_isometry_obstruction(shift_matrix(6));
  CHECK(shift.verdict == IsometryVerdict::NotAnIsometry);
  CHECK_FALSE(shift.isometry);
  CHECK_FALSE(shift.proper);
  CHECK(shift.isometry_defect == doctest::Approx(1.0));  // one dead basis vector
  CHECK(!shift.explanation.empty());

  const Mat u = testsupport::random_unitary(rng, 5);
  const IsometryReport unit = proper_isometry_obstruction(u);
  CHECK(unit.verdict == IsometryVerdict::Impossible);
  CHECK(unit.isometry);
  CHECK_FALSE(unit.proper);
  CHECK(unit.isometry_defect < 1e-10);
  CHECK(unit.coisometry_defect < 1e-10);
  CHECK(!unit.explanation.empty());

  CHECK(code_of([&] { proper_isometry_obstruction(Mat(3, 2)); }) ==
        ErrorCode::ShapeMismatch);
}
