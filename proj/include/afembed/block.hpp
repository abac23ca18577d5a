#pragma once

#include <vector>

#include "afembed/eig.hpp"
#include "afembed/matrix.hpp"

namespace afembed {

// Element of M_{d_1} (+) ... (+) M_{d_r}: one square dense block per summand.
// The C*-norm of a direct sum is the max of the block norms.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  explicit BlockMatrix(std::vector<int> dims);
  BlockMatrix(std::vector<int> dims, std::vector<Mat> blocks);

  static BlockMatrix identity(const std::vector<int>& dims);
  static BlockMatrix zeros(const std::vector<int>& dims) { return BlockMatrix(dims); }

  const std::vector<int>& dims() const { return dims_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  Mat& block(std::size_t k) { return blocks_[k]; }
  const Mat& block(std::size_t k) const { return blocks_[k]; }

  int total_dim() const;

  BlockMatrix operator+(const BlockMatrix& o) const;
  BlockMatrix operator-(const BlockMatrix& o) const;
  BlockMatrix operator*(const BlockMatrix& o) const;
  BlockMatrix operator*(cplx s) const;
  BlockMatrix& operator+=(const BlockMatrix& o);

  BlockMatrix adjoint() const;

  double op_norm() const;    // max over blocks of the operator norm
  double frob_norm() const;  // l2 over all entries
  bool is_hermitian(double tol) const;

  bool same_dims(const BlockMatrix& o) const { return dims_ == o.dims_; }

  // Dense block-diagonal embedding into M_{total_dim}.
  Mat to_dense() const;
  // Inverse of to_dense: reads the diagonal blocks, requires the
  // off-diagonal-block mass to be below tol (absolute).
  static BlockMatrix from_dense(const std::vector<int>& dims, const Mat& m, double tol);

 private:
  void check_same(const BlockMatrix& o) const;

  std::vector<int> dims_;
  std::vector<Mat> blocks_;
};

inline BlockMatrix operator*(cplx s, const BlockMatrix& m) { return m * s; }

// Blockwise functional calculus on a Hermitian block matrix.
BlockMatrix func_calc(const BlockMatrix& x, const std::function<double(double)>& f);

}  // namespace afembed
