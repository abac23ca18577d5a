#include "afembed/algebra.hpp"

#include <cmath>

namespace afembed {

namespace {

// Eigenvectors of a (numerically exact) projection with eigenvalue near 1,
// returned as columns.  Complains if the spectrum is not split around 1/2.
Mat range_basis_of_projection(const Mat& p, const char* what) {
  SpectralDecomposition s = hermitian_eig(p);
  int rank = 0;
  for (double lam : s.eigenvalues) {
    if (std::abs(lam) > 1e-6 && std::abs(lam - 1.0) > 1e-6) {
      fail(ErrorCode::NotAMorphism,
           std::string(what) + ": image of a diagonal unit is not a projection");
    }
    if (lam > 0.5) ++rank;
  }
  const int n = p.rows();
  Mat basis(n, rank);
  for (int t = 0; t < rank; ++t) {
    const int col = n - rank + t;  // eigenvalues ascending, near-1 at the end
    for (int i = 0; i < n; ++i) basis.at(i, t) = s.vectors.at(i, col);
  }
  return basis;
}

}  // namespace

MatrixUnitSystem::MatrixUnitSystem(std::vector<int> system_dims,
                                   std::vector<int> ambient_dims,
                                   std::vector<std::vector<BlockMatrix>> units)
    : system_dims_(std::move(system_dims)),
      ambient_dims_(std::move(ambient_dims)),
      units_(std::move(units)) {
  if (system_dims_.empty()) {
    fail(ErrorCode::InvalidDimension, "matrix unit system needs at least one block");
  }
  if (units_.size() != system_dims_.size()) {
    fail(ErrorCode::ShapeMismatch, "unit table does not match system dimensions");
  }
  for (std::size_t k = 0; k < system_dims_.size(); ++k) {
    const int n = system_dims_[k];
    if (n < 1) fail(ErrorCode::InvalidDimension, "system block dimensions must be >= 1");
    if (units_[k].size() != static_cast<std::size_t>(n) * n) {
      fail(ErrorCode::ShapeMismatch, "unit table does not match system dimensions");
    }
    for (const BlockMatrix& u : units_[k]) {
      if (u.dims() != ambient_dims_) {
        fail(ErrorCode::ShapeMismatch, "unit does not live in the ambient algebra");
      }
    }
  }
}

MatrixUnitSystem MatrixUnitSystem::canonical(const std::vector<int>& dims) {
  std::vector<std::vector<BlockMatrix>> units;
  units.reserve(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const int n = dims[k];
    std::vector<BlockMatrix> blockUnits;
    blockUnits.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        BlockMatrix e = BlockMatrix::zeros(dims);
        e.block(k).at(i, j) = 1.0;
        blockUnits.push_back(std::move(e));
      }
    }
    units.push_back(std::move(blockUnits));
  }
  return MatrixUnitSystem(dims, dims, std::move(units));
}

const BlockMatrix& MatrixUnitSystem::unit(std::size_t k, int i, int j) const {
  return units_[k][static_cast<std::size_t>(i) * system_dims_[k] + j];
}

BlockMatrix& MatrixUnitSystem::unit(std::size_t k, int i, int j) {
  return units_[k][static_cast<std::size_t>(i) * system_dims_[k] + j];
}

BlockMatrix MatrixUnitSystem::sum_of_diagonal_units() const {
  BlockMatrix s = BlockMatrix::zeros(ambient_dims_);
  for (std::size_t k = 0; k < system_dims_.size(); ++k) {
    for (int i = 0; i < system_dims_[k]; ++i) s += unit(k, i, i);
  }
  return s;
}

double MatrixUnitSystem::relation_defect_no_unit() const {
  double defect = 0.0;
  const std::size_t blocks = system_dims_.size();
  for (std::size_t k = 0; k < blocks; ++k) {
    const int nk = system_dims_[k];
    for (int i = 0; i < nk; ++i) {
      for (int j = 0; j < nk; ++j) {
        defect = std::max(defect, (unit(k, i, j).adjoint() - unit(k, j, i)).op_norm());
        for (std::size_t k2 = 0; k2 < blocks; ++k2) {
          const int nk2 = system_dims_[k2];
          for (int l = 0; l < nk2; ++l) {
            for (int m = 0; m < nk2; ++m) {
              BlockMatrix prod = unit(k, i, j) * unit(k2, l, m);
              if (k == k2 && j == l) prod = prod - unit(k, i, m);
              defect = std::max(defect, prod.op_norm());
            }
          }
        }
      }
    }
  }
  return defect;
}

double MatrixUnitSystem::relation_defect() const {
  const BlockMatrix gap = sum_of_diagonal_units() - BlockMatrix::identity(ambient_dims_);
  return std::max(relation_defect_no_unit(), gap.op_norm());
}

BlockMatrix RealizedMorphism::apply(const BlockMatrix& x) const {
  if (x.dims() != units.system_dims()) {
    fail(ErrorCode::ShapeMismatch, "element does not live in the morphism's source");
  }
  BlockMatrix out = BlockMatrix::zeros(units.ambient_dims());
  for (std::size_t k = 0; k < units.num_blocks(); ++k) {
    const int n = units.system_dims()[k];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const cplx v = x.block(k).at(i, j);
        if (v == cplx(0.0, 0.0)) continue;
        out += v * units.unit(k, i, j);
      }
    }
  }
  return out;
}

bool validate_mapping(const MappingMatrix& lambda, const FdAlgebra& a, const FdAlgebra& b) {
  if (lambda.cols != a.num_blocks() || lambda.rows != b.num_blocks()) {
    fail(ErrorCode::ShapeMismatch,
         "mapping matrix shape " + std::to_string(lambda.rows) + "x" +
             std::to_string(lambda.cols) + " does not match block counts " +
             std::to_string(b.num_blocks()) + "x" + std::to_string(a.num_blocks()));
  }
  if (!lambda.row_positive()) return false;
  return lambda.apply(a.dims) == b.dims;
}

MappingMatrix compose(const MappingMatrix& g, const MappingMatrix& h) {
  return product(g, h);
}

RealizedMorphism realize(const MappingMatrix& lambda, const FdAlgebra& a, const FdAlgebra& b) {
  if (!validate_mapping(lambda, a, b)) {
    fail(ErrorCode::InvalidMatrix,
         "mapping matrix fails the row condition or the dimension equation");
  }
  const std::vector<int> src = a.realized_dims();
  const std::vector<int> tgt = b.realized_dims();

  std::vector<std::vector<BlockMatrix>> units;
  units.reserve(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) {
    const int nk = src[k];
    std::vector<BlockMatrix> blockUnits(static_cast<std::size_t>(nk) * nk,
                                        BlockMatrix::zeros(tgt));
    for (std::size_t f = 0; f < tgt.size(); ++f) {
      const std::int64_t mult = to_checked_int64(lambda.at(f, k), "multiplicity");
      if (mult == 0) continue;
      // Base offset of the tiles of source block k inside target block f.
      int base = 0;
      for (std::size_t e = 0; e < k; ++e) {
        base += static_cast<int>(to_checked_int64(lambda.at(f, e), "multiplicity")) * src[e];
      }
      for (int i = 0; i < nk; ++i) {
        for (int j = 0; j < nk; ++j) {
          Mat& img = blockUnits[static_cast<std::size_t>(i) * nk + j].block(f);
          for (std::int64_t t = 0; t < mult; ++t) {
            const int off = base + static_cast<int>(t) * nk;
            img.at(off + i, off + j) = 1.0;
          }
        }
      }
    }
    units.push_back(std::move(blockUnits));
  }

  RealizedMorphism phi;
  phi.source = a;
  phi.target = b;
  phi.units = MatrixUnitSystem(src, tgt, std::move(units));
  return phi;
}

MappingMatrix mapping_matrix_of(const RealizedMorphism& phi, double tol) {
  const std::size_t srcBlocks = phi.units.num_blocks();
  const std::size_t tgtBlocks = phi.units.ambient_dims().size();
  MappingMatrix lambda(tgtBlocks, srcBlocks);
  for (std::size_t k = 0; k < srcBlocks; ++k) {
    const BlockMatrix& e00 = phi.units.unit(k, 0, 0);
    for (std::size_t f = 0; f < tgtBlocks; ++f) {
      const cplx tr = e00.block(f).trace();
      const double rounded = std::round(tr.real());
      if (std::abs(tr.real() - rounded) > tol || std::abs(tr.imag()) > tol || rounded < -0.5) {
        fail(ErrorCode::NotAMorphism,
             "block trace of a diagonal unit image is not a nonnegative integer");
      }
      lambda.at(f, k) = Int(static_cast<long long>(rounded));
    }
  }
  return lambda;
}

ConjugacyResult inner_conjugacy(const RealizedMorphism& phi, const RealizedMorphism& psi) {
  if (phi.source != psi.source || phi.target != psi.target) {
    fail(ErrorCode::ShapeMismatch, "conjugacy needs a common source and target");
  }
  ConjugacyResult res;
  res.lambda_phi = mapping_matrix_of(phi);
  res.lambda_psi = mapping_matrix_of(psi);
  if (res.lambda_phi != res.lambda_psi) {
    res.conjugate = false;
    return res;
  }

  const std::vector<int> src = phi.units.system_dims();
  const std::vector<int> tgt = phi.units.ambient_dims();
  BlockMatrix u = BlockMatrix::zeros(tgt);

  for (std::size_t f = 0; f < tgt.size(); ++f) {
    Mat uf(tgt[f], tgt[f]);
    for (std::size_t k = 0; k < src.size(); ++k) {
      const std::int64_t mult = to_checked_int64(res.lambda_phi.at(f, k), "multiplicity");
      if (mult == 0) continue;
      const Mat basisPhi = range_basis_of_projection(phi.unit_image(k, 0, 0).block(f), "phi");
      const Mat basisPsi = range_basis_of_projection(psi.unit_image(k, 0, 0).block(f), "psi");
      if (basisPhi.cols() != mult || basisPsi.cols() != mult) {
        fail(ErrorCode::NotAMorphism, "unit image rank disagrees with its block trace");
      }
      const int nk = src[k];
      for (std::int64_t t = 0; t < mult; ++t) {
        Mat vPhi(tgt[f], 1), vPsi(tgt[f], 1);
        for (int r = 0; r < tgt[f]; ++r) {
          vPhi.at(r, 0) = basisPhi.at(r, static_cast<int>(t));
          vPsi.at(r, 0) = basisPsi.at(r, static_cast<int>(t));
        }
        for (int i = 0; i < nk; ++i) {
          const Mat aVec = phi.unit_image(k, i, 0).block(f) * vPhi;
          const Mat bVec = psi.unit_image(k, i, 0).block(f) * vPsi;
          uf += aVec * bVec.adjoint();
        }
      }
    }
    u.block(f) = uf;
  }

  res.conjugate = true;
  res.unitary = std::move(u);
  return res;
}

}  // namespace afembed
