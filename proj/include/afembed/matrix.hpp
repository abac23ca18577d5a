#pragma once

#include <complex>
#include <vector>

#include "afembed/error.hpp"

namespace afembed {

using cplx = std::complex<double>;

// Dense complex matrix with value semantics, row-major storage.  Sized for
// desk-scale operator algebra: everything here is O(n^3)-naive and
// deterministic (fixed summation order, no threading).
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(check_size(rows, cols)) {}

  static Mat identity(int n);
  static Mat zeros(int rows, int cols) { return Mat(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  bool square() const { return rows_ == cols_; }

  cplx& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const cplx& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat operator*(cplx s) const;
  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);

  Mat adjoint() const;

  cplx trace() const;
  double frob_norm() const;
  double max_abs() const;
  bool is_hermitian(double tol) const;

  bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  static std::size_t check_size(int rows, int cols);

  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

inline Mat operator*(cplx s, const Mat& m) { return m * s; }

}  // namespace afembed
