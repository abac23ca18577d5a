#pragma once

#include <optional>

#include "afembed/block.hpp"
#include "afembed/dimension.hpp"

namespace afembed {

// System of matrix units of type (n_1,...,n_K) sitting inside an ambient
// finite-dimensional C*-algebra: elements e^k_{ij} with
//   e^k_{ij} e^{k'}_{lm} = delta_{kk'} delta_{jl} e^k_{im},
//   (e^k_{ij})^* = e^k_{ji},
//   sum_{k,i} e^k_{ii} = 1.
// Indices are 0-based throughout.
class MatrixUnitSystem {
 public:
  MatrixUnitSystem() = default;
  MatrixUnitSystem(std::vector<int> system_dims, std::vector<int> ambient_dims,
                   std::vector<std::vector<BlockMatrix>> units);

  // The canonical units of the algebra with the given dimensions, inside
  // itself: e^k_{ij} is the (i,j) elementary matrix in block k.
  static MatrixUnitSystem canonical(const std::vector<int>& dims);

  const std::vector<int>& system_dims() const { return system_dims_; }
  const std::vector<int>& ambient_dims() const { return ambient_dims_; }
  std::size_t num_blocks() const { return system_dims_.size(); }

  const BlockMatrix& unit(std::size_t k, int i, int j) const;
  BlockMatrix& unit(std::size_t k, int i, int j);

  // Max norm residual over all defining relations, the adjoint symmetry, and
  // the unitality sum.  Quadratic in the number of units; fine at desk scale.
  double relation_defect() const;
  // Same but without the unitality term (used where the identity gap is
  // diagnosed structurally instead).
  double relation_defect_no_unit() const;

  BlockMatrix sum_of_diagonal_units() const;

 private:
  std::vector<int> system_dims_;
  std::vector<int> ambient_dims_;
  std::vector<std::vector<BlockMatrix>> units_;  // [k][i*n_k + j]
};

// A unital *-homomorphism between finite-dimensional C*-algebras, stored as
// the images of the source's canonical matrix units.
struct RealizedMorphism {
  FdAlgebra source;
  FdAlgebra target;
  MatrixUnitSystem units;  // system dims = source blocks, ambient = target

  const BlockMatrix& unit_image(std::size_t k, int i, int j) const {
    return units.unit(k, i, j);
  }

  // Linear extension to an arbitrary source element.
  BlockMatrix apply(const BlockMatrix& x) const;
};

// True iff Lambda has matching shape, every row of Lambda is nonzero, and
// Lambda * dims(a) = dims(b).  Throws SHAPE_MISMATCH if the matrix shape does
// not match the block counts at all.
bool validate_mapping(const MappingMatrix& lambda, const FdAlgebra& a, const FdAlgebra& b);

// Mapping matrix of a composition: product of the mapping matrices.
MappingMatrix compose(const MappingMatrix& g, const MappingMatrix& h);

// Canonical concrete realization of the morphism with mapping matrix lambda:
// in target block f the source blocks appear as diagonal tiles, ordered by
// source block index, block e repeated lambda(f,e) times.  Requires
// validate_mapping (INVALID_MATRIX otherwise).
RealizedMorphism realize(const MappingMatrix& lambda, const FdAlgebra& a, const FdAlgebra& b);

// Multiplicity matrix recovered from a realized morphism: entry (f,k) is the
// trace of the f-block of the image of e^k_{00}.  NOT_A_MORPHISM if a trace
// is farther than tol from a nonnegative integer.
MappingMatrix mapping_matrix_of(const RealizedMorphism& phi, double tol = 1e-6);

struct ConjugacyResult {
  bool conjugate = false;
  MappingMatrix lambda_phi;
  MappingMatrix lambda_psi;
  std::optional<BlockMatrix> unitary;  // psi(x) = u^* phi(x) u when conjugate
};

// Decides inner conjugacy of two morphisms with the same source and target:
// conjugate iff the mapping matrices coincide; in that case a concrete
// intertwining unitary is produced.
ConjugacyResult inner_conjugacy(const RealizedMorphism& phi, const RealizedMorphism& psi);

}  // namespace afembed
