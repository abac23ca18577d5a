#pragma once

#include <functional>
#include <vector>

#include "afembed/matrix.hpp"

namespace afembed {

// Spectral decomposition of a Hermitian matrix: a = vectors * diag(eigenvalues)
// * vectors^*, eigenvalues ascending, vectors unitary (columns are
// eigenvectors in the matching order).
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Mat vectors;

  double min_eigenvalue() const { return eigenvalues.front(); }
  double max_eigenvalue() const { return eigenvalues.back(); }
};

// Cyclic Jacobi diagonalization for complex Hermitian matrices.  Off-diagonal
// mass is driven below tol_rel * frobenius norm.  Deterministic sweep order.
// Throws NOT_HERMITIAN if the input is not Hermitian to hermitian_tol
// (absolute, scaled internally by the caller when needed), INTERNAL if the
// sweep limit is exhausted (does not happen for sane sizes).
SpectralDecomposition hermitian_eig(const Mat& a, double tol_rel = 1e-14);

// f applied through the spectral decomposition: f(a) = V diag(f(lambda)) V^*.
Mat func_calc(const Mat& a, const std::function<double(double)>& f);
Mat func_calc(const SpectralDecomposition& s, const std::function<double(double)>& f);

// Operator (spectral) norm, any rectangular shape: sqrt(lambda_max(a^* a)).
double operator_norm(const Mat& a);

}  // namespace afembed
