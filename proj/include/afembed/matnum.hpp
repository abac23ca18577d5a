#pragma once

#include <vector>

#include "afembed/algebra.hpp"
#include "afembed/block.hpp"
#include "afembed/dimension.hpp"
#include "afembed/matrix.hpp"

namespace afembed {

// Lifting function: 0 on [0, 1/3], linear up to (2/3)^{-1/2} at 2/3,
// t^{-1/2} beyond. Applied to x = w*w it renormalizes an almost partial
// isometry into an exact one.
double h_gap_function(double t);

struct AlmostProjection {
  BlockMatrix x;     // Hermitian
  double defect;     // ‖x² − x‖

  // computes the defect and checks Hermitian-ness
  explicit AlmostProjection(BlockMatrix m);
};

// Spectral rounding: indicator of (1/2, ∞) applied to x. Requires
// defect ≤ 1/8 so the spectrum clears 1/2; the output is an exact
// projection with ‖p − x‖ ≤ 2·defect.
BlockMatrix correct_projection(const AlmostProjection& x);

// w̃ = (p' b p) · h(x) with x = (p' b p)*(p' b p). Rejects inputs whose
// x-spectrum meets the open band (1/3, 2/3); otherwise w̃ is a partial
// isometry with w̃*w̃ ≤ p and w̃w̃* ≤ p'.
BlockMatrix lift_partial_isometry(const BlockMatrix& b, const BlockMatrix& p,
                                  const BlockMatrix& p_prime);

// W = V·sqrt(f(V*V)), f(t) = min(1, 1/t): the nearest-contraction repair.
// Requires ‖V‖ ≤ 1.5. ‖W‖ ≤ 1 and ‖W − V‖ ≤ (‖V‖ − 1)₊ up to rounding.
Mat correct_near_contraction(const Mat& v);

// Input candidates for a system of matrix units of ⊕_k M_{n_k}: for each
// block k a row-major list of n_k² block matrices, units[k][i*n_k + j] ≈
// e^k_{ij}. All candidates live in one common ambient algebra.
struct AlmostMatrixUnits {
  DimensionVector system_dims;
  std::vector<int> ambient_dims;
  std::vector<std::vector<BlockMatrix>> units;
};

// Repairs near-units into an exact system with the same dimension vector:
// corrects the diagonal projections (forcing the last so they sum to the
// identity), lifts the first-column partial isometries, and reassembles
// e^k_{ij} = u_i u_j*. Requires relation defects ≤ 1e-2; reports
// InconsistentDimensions when the corrected ranks cannot form blocks of
// equal multiplicity.
MatrixUnitSystem lift_matrix_units(const AlmostMatrixUnits& almost);

}  // namespace afembed
