#include "afembed/block.hpp"

#include <cmath>

namespace afembed {

BlockMatrix::BlockMatrix(std::vector<int> dims) : dims_(std::move(dims)) {
  blocks_.reserve(dims_.size());
  for (int d : dims_) {
    if (d < 1) fail(ErrorCode::InvalidDimension, "block dimensions must be >= 1");
    blocks_.emplace_back(d, d);
  }
}

BlockMatrix::BlockMatrix(std::vector<int> dims, std::vector<Mat> blocks)
    : dims_(std::move(dims)), blocks_(std::move(blocks)) {
  if (dims_.size() != blocks_.size()) {
    fail(ErrorCode::ShapeMismatch, "block count does not match dimension count");
  }
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (blocks_[k].rows() != dims_[k] || blocks_[k].cols() != dims_[k]) {
      fail(ErrorCode::ShapeMismatch, "block shape does not match declared dimension");
    }
  }
}

BlockMatrix BlockMatrix::identity(const std::vector<int>& dims) {
  BlockMatrix m(dims);
  for (std::size_t k = 0; k < m.blocks_.size(); ++k) {
    m.blocks_[k] = Mat::identity(m.dims_[k]);
  }
  return m;
}

int BlockMatrix::total_dim() const {
  int t = 0;
  for (int d : dims_) t += d;
  return t;
}

void BlockMatrix::check_same(const BlockMatrix& o) const {
  if (dims_ != o.dims_) fail(ErrorCode::ShapeMismatch, "block dimension vectors differ");
}

BlockMatrix BlockMatrix::operator+(const BlockMatrix& o) const {
  check_same(o);
  BlockMatrix r = *this;
  for (std::size_t k = 0; k < blocks_.size(); ++k) r.blocks_[k] += o.blocks_[k];
  return r;
}

BlockMatrix BlockMatrix::operator-(const BlockMatrix& o) const {
  check_same(o);
  BlockMatrix r = *this;
  for (std::size_t k = 0; k < blocks_.size(); ++k) r.blocks_[k] -= o.blocks_[k];
  return r;
}

BlockMatrix BlockMatrix::operator*(const BlockMatrix& o) const {
  check_same(o);
  BlockMatrix r(dims_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) r.blocks_[k] = blocks_[k] * o.blocks_[k];
  return r;
}

BlockMatrix BlockMatrix::operator*(cplx s) const {
  BlockMatrix r = *this;
  for (auto& b : r.blocks_) b = b * s;
  return r;
}

BlockMatrix& BlockMatrix::operator+=(const BlockMatrix& o) {
  check_same(o);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += o.blocks_[k];
  return *this;
}

BlockMatrix BlockMatrix::adjoint() const {
  BlockMatrix r = *this;
  for (auto& b : r.blocks_) b = b.adjoint();
  return r;
}

double BlockMatrix::op_norm() const {
  double m = 0.0;
  for (const Mat& b : blocks_) m = std::max(m, operator_norm(b));
  return m;
}

double BlockMatrix::frob_norm() const {
  double s = 0.0;
  for (const Mat& b : blocks_) {
    const double f = b.frob_norm();
    s += f * f;
  }
  return std::sqrt(s);
}

bool BlockMatrix::is_hermitian(double tol) const {
  for (const Mat& b : blocks_) {
    if (!b.is_hermitian(tol)) return false;
  }
  return true;
}

Mat BlockMatrix::to_dense() const {
  Mat m(total_dim(), total_dim());
  int off = 0;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int d = dims_[k];
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) m.at(off + i, off + j) = blocks_[k].at(i, j);
    }
    off += d;
  }
  return m;
}

BlockMatrix BlockMatrix::from_dense(const std::vector<int>& dims, const Mat& m, double tol) {
  BlockMatrix r(dims);
  if (m.rows() != r.total_dim() || m.cols() != r.total_dim()) {
    fail(ErrorCode::ShapeMismatch, "dense matrix does not match block dimensions");
  }
  int off = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const int d = dims[k];
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) r.block(k).at(i, j) = m.at(off + i, off + j);
    }
    off += d;
  }
  // Everything outside the diagonal blocks must be negligible.
  double leak = 0.0;
  const Mat back = r.to_dense();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      leak = std::max(leak, std::abs(m.at(i, j) - back.at(i, j)));
    }
  }
  if (leak > tol) {
    fail(ErrorCode::ShapeMismatch,
         "dense matrix has mass outside the block-diagonal support");
  }
  return r;
}

BlockMatrix func_calc(const BlockMatrix& x, const std::function<double(double)>& f) {
  BlockMatrix r = x;
  for (std::size_t k = 0; k < x.num_blocks(); ++k) {
    r.block(k) = func_calc(x.block(k), f);
  }
  return r;
}

}  // namespace afembed
