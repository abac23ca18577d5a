#include "afembed/matrix.hpp"

#include <cmath>

namespace afembed {

std::size_t Mat::check_size(int rows, int cols) {
  if (rows < 0 || cols < 0) {
    fail(ErrorCode::ShapeMismatch, "negative matrix shape");
  }
  return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  Mat r = *this;
  r += o;
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  Mat r = *this;
  r -= o;
  return r;
}

Mat& Mat::operator+=(const Mat& o) {
  if (!same_shape(o)) fail(ErrorCode::ShapeMismatch, "matrix addition shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (!same_shape(o)) fail(ErrorCode::ShapeMismatch, "matrix subtraction shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_) fail(ErrorCode::ShapeMismatch, "matrix product shape mismatch");
  Mat r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const cplx v = at(i, k);
      if (v == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < o.cols_; ++j) {
        r.at(i, j) += v * o.at(k, j);
      }
    }
  }
  return r;
}

Mat Mat::operator*(cplx s) const {
  Mat r = *this;
  for (auto& v : r.a_) v *= s;
  return r;
}

Mat Mat::adjoint() const {
  Mat r(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r.at(j, i) = std::conj(at(i, j));
  }
  return r;
}

cplx Mat::trace() const {
  cplx t = 0.0;
  const int n = rows_ < cols_ ? rows_ : cols_;
  for (int i = 0; i < n; ++i) t += at(i, i);
  return t;
}

double Mat::frob_norm() const {
  double s = 0.0;
  for (const cplx& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double m = 0.0;
  for (const cplx& v : a_) m = std::max(m, std::abs(v));
  return m;
}

bool Mat::is_hermitian(double tol) const {
  if (!square()) return false;
  for (int i = 0; i < rows_; ++i) {
    for (int j = i; j < cols_; ++j) {
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
    }
  }
  return true;
}

}  // namespace afembed
