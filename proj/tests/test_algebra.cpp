#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afembed/algebra.hpp"
#include "support.hpp"

using namespace afembed;
using testsupport::Rng;

namespace {

MappingMatrix mm(std::vector<std::vector<long long>> rows) {
  std::vector<std::vector<Int>> conv;
  for (auto& r : rows) conv.emplace_back(r.begin(), r.end());
  return MappingMatrix::from_rows(conv);
}

// Random valid morphism data: dims(b) is forced as lambda * dims(a).
struct RandomMorphism {
  MappingMatrix lambda;
  FdAlgebra a, b;
};

RandomMorphism random_morphism(Rng& rng, int max_blocks = 3, int max_dim = 3,
                               int max_mult = 4) {
  std::uniform_int_distribution<int> nb(1, max_blocks);
  std::uniform_int_distribution<int> nd(1, max_dim);
  std::uniform_int_distribution<int> nm(0, max_mult);
  const int src = nb(rng), tgt = nb(rng);
  std::vector<Int> dims;
  for (int i = 0; i < src; ++i) dims.emplace_back(nd(rng));
  RandomMorphism r;
  r.a = FdAlgebra(DimensionVector(dims));
  r.lambda = MappingMatrix(tgt, src);
  for (int f = 0; f < tgt; ++f) {
    bool positive = false;
    for (int e = 0; e < src; ++e) {
      const int v = nm(rng);
      r.lambda.at(f, e) = v;
      positive = positive || v > 0;
    }
    if (!positive) r.lambda.at(f, std::uniform_int_distribution<int>(0, src - 1)(rng)) = 1;
  }
  r.b = FdAlgebra(r.lambda.apply(r.a.dims));
  return r;
}

}  // namespace

TEST_CASE("mapping validation checks rows and the dimension equation") {
  const FdAlgebra a({1, 1, 2});
  const FdAlgebra b({10});
  CHECK(validate_mapping(mm({{2, 2, 3}}), a, b));
  CHECK(validate_mapping(mm({{3, 3, 2}}), a, b));
  CHECK_FALSE(validate_mapping(mm({{2, 2, 2}}), a, b));  // sums to 8, not 10

  const FdAlgebra c({1, 1});
  CHECK_FALSE(validate_mapping(mm({{1, 1}, {0, 0}}), c, FdAlgebra({2, 1})));
  CHECK_THROWS_AS(validate_mapping(mm({{1, 1, 1}}), a, FdAlgebra({2, 2})), Error);
}

TEST_CASE("composition multiplies mapping matrices") {
  const MappingMatrix g = mm({{2, 1}});
  const MappingMatrix h = mm({{1}, {1}});
  const MappingMatrix gh = compose(g, h);
  CHECK(gh == mm({{3}}));
  CHECK_THROWS_AS(compose(h, h), Error);
}

TEST_CASE("realization places diagonal tiles and is unital") {
  // M_2 -> M_2 (+) M_2 with multiplicity one in each summand.
  const FdAlgebra a({2});
  const FdAlgebra b({2, 2});
  const RealizedMorphism phi = realize(mm({{1}, {1}}), a, b);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const BlockMatrix& img = phi.unit_image(0, i, j);
      for (std::size_t f = 0; f < 2; ++f) {
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) {
            const double expect = (r == i && c == j) ? 1.0 : 0.0;
            CHECK(img.block(f).at(r, c).real() == expect);
          }
        }
      }
    }
  }
  CHECK(phi.units.relation_defect() <= 1e-14);
}

TEST_CASE("realization satisfies the matrix unit relations exactly") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomMorphism r = random_morphism(rng);
    const RealizedMorphism phi = realize(r.lambda, r.a, r.b);
    CHECK(phi.units.relation_defect() <= 1e-13);
  }
}

TEST_CASE("mapping matrix round-trips through realization") {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const RandomMorphism r = random_morphism(rng);
    const RealizedMorphism phi = realize(r.lambda, r.a, r.b);
    CHECK(mapping_matrix_of(phi) == r.lambda);
  }
}

TEST_CASE("mapping matrix is invariant under unitary conjugation") {
  Rng rng(31);
  const RandomMorphism r = random_morphism(rng);
  RealizedMorphism phi = realize(r.lambda, r.a, r.b);
  const std::vector<int> tdims = r.b.realized_dims();
  BlockMatrix u(tdims);
  for (std::size_t k = 0; k < tdims.size(); ++k) {
    u.block(k) = testsupport::random_unitary(rng, tdims[k]);
  }
  RealizedMorphism conj = phi;
  for (std::size_t k = 0; k < phi.units.num_blocks(); ++k) {
    const int nk = phi.units.system_dims()[k];
    for (int i = 0; i < nk; ++i) {
      for (int j = 0; j < nk; ++j) {
        conj.units.unit(k, i, j) = u.adjoint() * phi.units.unit(k, i, j) * u;
      }
    }
  }
  CHECK(mapping_matrix_of(conj) == r.lambda);
  CHECK(conj.units.relation_defect() <= 1e-12);
}

TEST_CASE("functoriality: realized composition has the product matrix") {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    // a --h--> b --g--> c; build g with b as its source.
    const RandomMorphism rh = random_morphism(rng, 2, 2, 2);
    const FdAlgebra& b = rh.b;
    std::uniform_int_distribution<int> nb(1, 2), nm(0, 2);
    const int tgt = nb(rng);
    MappingMatrix lg(tgt, b.num_blocks());
    for (int f = 0; f < tgt; ++f) {
      bool positive = false;
      for (std::size_t e = 0; e < b.num_blocks(); ++e) {
        const int v = nm(rng);
        lg.at(f, e) = v;
        positive = positive || v > 0;
      }
      if (!positive) lg.at(f, 0) = 1;
    }
    const FdAlgebra c(lg.apply(b.dims));
    const RealizedMorphism phiH = realize(rh.lambda, rh.a, b);
    const RealizedMorphism phiG = realize(lg, b, c);

    // Composite morphism: push each source unit through both maps.
    RealizedMorphism comp;
    comp.source = rh.a;
    comp.target = c;
    std::vector<std::vector<BlockMatrix>> units;
    const std::vector<int> sdims = rh.a.realized_dims();
    for (std::size_t k = 0; k < sdims.size(); ++k) {
      std::vector<BlockMatrix> blockUnits;
      for (int i = 0; i < sdims[k]; ++i) {
        for (int j = 0; j < sdims[k]; ++j) {
          blockUnits.push_back(phiG.apply(phiH.unit_image(k, i, j)));
        }
      }
      units.push_back(std::move(blockUnits));
    }
    comp.units = MatrixUnitSystem(sdims, c.realized_dims(), std::move(units));
    CHECK(mapping_matrix_of(comp) == compose(lg, rh.lambda));
  }
}

TEST_CASE("inner conjugacy produces a verified intertwining unitary") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomMorphism r = random_morphism(rng, 2, 3, 2);
    const RealizedMorphism phi = realize(r.lambda, r.a, r.b);

    // psi: conjugate phi by a random block unitary.
    const std::vector<int> tdims = r.b.realized_dims();
    BlockMatrix u(tdims);
    for (std::size_t k = 0; k < tdims.size(); ++k) {
      u.block(k) = testsupport::random_unitary(rng, tdims[k]);
    }
    RealizedMorphism psi = phi;
    for (std::size_t k = 0; k < phi.units.num_blocks(); ++k) {
      const int nk = phi.units.system_dims()[k];
      for (int i = 0; i < nk; ++i) {
        for (int j = 0; j < nk; ++j) {
          psi.units.unit(k, i, j) = u.adjoint() * phi.units.unit(k, i, j) * u;
        }
      }
    }

    const ConjugacyResult res = inner_conjugacy(phi, psi);
    REQUIRE(res.conjugate);
    REQUIRE(res.unitary.has_value());
    const BlockMatrix& w = *res.unitary;

    const BlockMatrix gram = w.adjoint() * w;
    CHECK(testsupport::dist_op(gram, BlockMatrix::identity(w.dims())) <= 1e-10);
    for (std::size_t k = 0; k < phi.units.num_blocks(); ++k) {
      const int nk = phi.units.system_dims()[k];
      for (int i = 0; i < nk; ++i) {
        for (int j = 0; j < nk; ++j) {
          const BlockMatrix lhs = w.adjoint() * phi.units.unit(k, i, j) * w;
          CHECK(testsupport::dist_op(lhs, psi.units.unit(k, i, j)) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("morphisms with different mapping matrices are not conjugate") {
  const FdAlgebra a({1, 1});
  const FdAlgebra b({3});
  const RealizedMorphism phi = realize(mm({{1, 2}}), a, b);
  const RealizedMorphism psi = realize(mm({{2, 1}}), a, b);
  const ConjugacyResult res = inner_conjugacy(phi, psi);
  CHECK_FALSE(res.conjugate);
  CHECK_FALSE(res.unitary.has_value());
  CHECK(res.lambda_phi == mm({{1, 2}}));
  CHECK(res.lambda_psi == mm({{2, 1}}));
}

TEST_CASE("morphism application is linear and multiplicative") {
  Rng rng(43);
  const RandomMorphism r = random_morphism(rng);
  const RealizedMorphism phi = realize(r.lambda, r.a, r.b);
  const std::vector<int> sdims = r.a.realized_dims();
  const BlockMatrix x = testsupport::random_block(rng, sdims);
  const BlockMatrix y = testsupport::random_block(rng, sdims);
  CHECK(testsupport::dist_op(phi.apply(x * y), phi.apply(x) * phi.apply(y)) <= 1e-10);
  CHECK(testsupport::dist_op(phi.apply(x + y), phi.apply(x) + phi.apply(y)) <= 1e-10);
  CHECK(testsupport::dist_op(phi.apply(x.adjoint()), phi.apply(x).adjoint()) <= 1e-10);
  // Unital: the identity goes to the identity.
  const BlockMatrix one = BlockMatrix::identity(sdims);
  CHECK(testsupport::dist_op(phi.apply(one), BlockMatrix::identity(r.b.realized_dims())) <=
        1e-12);
  // Isometric on the norm (injective when every column is positive).
  if (r.lambda.col_positive()) {
    CHECK(phi.apply(x).op_norm() == doctest::Approx(x.op_norm()).epsilon(1e-9));
  }
}
