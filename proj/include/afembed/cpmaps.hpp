#pragma once

#include <vector>

#include "afembed/block.hpp"
#include "afembed/dimension.hpp"
#include "afembed/matrix.hpp"

namespace afembed {

// Linear map M_n -> target, stored through its Choi matrix
//   C[(i,a),(j,b)] = psi(e_ij)[a,b],  index (i,a) = i*D + a,
// where D is the realized dimension of the target. The map is completely
// positive exactly when C is positive semidefinite.
struct CpMap {
  int source_dim = 0;
  FdAlgebra target;
  Mat choi;

  int target_total() const;

  // psi(e_ij) read back from the Choi block, as an element of the target.
  BlockMatrix unit_image(int i, int j) const;
  // Linear extension to an arbitrary source element.
  BlockMatrix apply(const Mat& x) const;
  // Image of the identity; its norm is the map norm for CP maps.
  BlockMatrix unit() const;
};

// Assembles the Choi matrix from the n^2 images of the source matrix units,
// row-major: values[i*n + j] = psi(e_ij).
CpMap choi_of(int source_dim, const FdAlgebra& target,
              const std::vector<BlockMatrix>& values);

struct CpVerdict {
  bool cp = false;
  double min_eigenvalue = 0.0;
};

// PSD test on the Choi matrix, tolerance -1e-10 on the bottom eigenvalue.
CpVerdict is_cp(const CpMap& m);

// Dilation data: Phi(x) = V* (x tensor 1_R) V with V of shape (n*R) x D,
// row index (i, alpha) = i*R + alpha. kraus[alpha] is the D x n matrix of
// the corresponding Kraus term, Phi(x) = sum_alpha K x K*.
struct StinespringData {
  int source_dim = 0;
  int multiplicity = 0;  // R, the number of Kraus terms
  Mat v;
  std::vector<Mat> kraus;

  Mat represent(const Mat& x) const;  // x tensor 1_R
  Mat reconstruct(const Mat& x) const;  // V* (x tensor 1_R) V, dense D x D
};

// Factorization through the Choi eigendecomposition; eigenvalues below 1e-12
// are dropped. Throws NotCp on a genuinely negative Choi.
StinespringData stinespring(const CpMap& m);

// Repairs a CP map of norm at most 1.5 into a CP contraction by damping the
// Stinespring dilation: Psi(x) = W* (x tensor 1) W with W the
// near-contraction correction of V.
CpMap cp_near_contraction_fix(const CpMap& m);

// a^{-1/2} Phi(.) a^{-1/2} with a = Phi(1); requires a invertible
// (bottom eigenvalue >= 1e-6). The result is unital and CP when m is.
CpMap unitalize(const CpMap& m);

struct FactorizationReport {
  bool valid = false;
  double residual = 0.0;        // max over matrix units of the defect norm
  bool psi_cp = false;
  bool rho_cp = false;
  double psi_norm = 0.0;
  double rho_norm = 0.0;
};

// Checks phi = rho o psi on the source matrix units and that both factors
// are CP contractions. The middle algebra must be a single matrix block.
FactorizationReport matricial_factor_check(const CpMap& phi, const CpMap& psi,
                                           const CpMap& rho);

}  // namespace afembed
