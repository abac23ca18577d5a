#pragma once

#include <random>

#include "afembed/block.hpp"
#include "afembed/eig.hpp"
#include "afembed/matrix.hpp"

namespace testsupport {

using afembed::BlockMatrix;
using afembed::cplx;
using afembed::Mat;

using Rng = std::mt19937_64;

inline Mat random_gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m.at(i, j) = cplx(dist(rng), dist(rng));
  }
  return m;
}

inline Mat random_hermitian(Rng& rng, int n, double scale = 1.0) {
  const Mat g = random_gaussian(rng, n, n);
  Mat h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      h.at(i, j) = 0.5 * scale * (g.at(i, j) + std::conj(g.at(j, i)));
    }
  }
  return h;
}

// Unitary via modified Gram-Schmidt on a Gaussian matrix.
inline Mat random_unitary(Rng& rng, int n) {
  Mat q = random_gaussian(rng, n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      cplx dot = 0.0;
      for (int i = 0; i < n; ++i) dot += std::conj(q.at(i, k)) * q.at(i, j);
      for (int i = 0; i < n; ++i) q.at(i, j) -= dot * q.at(i, k);
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += std::norm(q.at(i, j));
    nrm = std::sqrt(nrm);
    for (int i = 0; i < n; ++i) q.at(i, j) = q.at(i, j) * (1.0 / nrm);
  }
  return q;
}

// Hermitian with prescribed eigenvalues in a random basis.
inline Mat hermitian_with_spectrum(Rng& rng, const std::vector<double>& lambda) {
  const int n = static_cast<int>(lambda.size());
  const Mat u = random_unitary(rng, n);
  Mat d(n, n);
  for (int i = 0; i < n; ++i) d.at(i, i) = lambda[i];
  return u * d * u.adjoint();
}

inline BlockMatrix random_block_hermitian(Rng& rng, const std::vector<int>& dims,
                                          double scale = 1.0) {
  BlockMatrix b(dims);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    b.block(k) = random_hermitian(rng, dims[k], scale);
  }
  return b;
}

inline BlockMatrix random_block(Rng& rng, const std::vector<int>& dims, double scale = 1.0) {
  BlockMatrix b(dims);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    b.block(k) = random_gaussian(rng, dims[k], dims[k]) * cplx(scale, 0.0);
  }
  return b;
}

inline double dist_op(const Mat& a, const Mat& b) { return afembed::operator_norm(a - b); }

inline double dist_op(const BlockMatrix& a, const BlockMatrix& b) {
  return (a - b).op_norm();
}

}  // namespace testsupport
