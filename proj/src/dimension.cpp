#include "afembed/dimension.hpp"

#include <sstream>

namespace afembed {

std::int64_t to_checked_int64(const Int& v, const char* what) {
  if (v < std::numeric_limits<std::int64_t>::min() ||
      v > std::numeric_limits<std::int64_t>::max()) {
    fail(ErrorCode::ScaleLimit, std::string(what) + " exceeds 64-bit range: " + v.str());
  }
  return static_cast<std::int64_t>(v);
}

DimensionVector::DimensionVector(std::vector<Int> e) : entries(std::move(e)) {
  if (entries.empty()) {
    fail(ErrorCode::InvalidDimension, "dimension vector must be nonempty");
  }
  for (const Int& n : entries) {
    if (n < 1) {
      fail(ErrorCode::InvalidDimension,
           "dimension vector entries must be >= 1, got " + n.str());
    }
  }
}

std::string DimensionVector::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) os << ",";
    os << entries[i].str();
  }
  os << ")";
  return os.str();
}

std::vector<int> FdAlgebra::realized_dims() const {
  std::vector<int> out;
  out.reserve(dims.size());
  for (const Int& n : dims.entries) {
    if (n > kMaxRealizedDim) {
      fail(ErrorCode::ScaleLimit,
           "block dimension " + n.str() + " too large to realize densely");
    }
    out.push_back(static_cast<int>(n));
  }
  return out;
}

MappingMatrix::MappingMatrix(std::size_t r, std::size_t c)
    : rows(r), cols(c), entries(r * c, Int(0)) {
  if (r == 0 || c == 0) {
    fail(ErrorCode::InvalidMatrix, "mapping matrix must have positive shape");
  }
}

MappingMatrix::MappingMatrix(std::size_t r, std::size_t c, std::vector<Int> e)
    : rows(r), cols(c), entries(std::move(e)) {
  if (r == 0 || c == 0) {
    fail(ErrorCode::InvalidMatrix, "mapping matrix must have positive shape");
  }
  if (entries.size() != r * c) {
    fail(ErrorCode::InvalidMatrix, "mapping matrix entry count does not match shape");
  }
  for (const Int& v : entries) {
    if (v < 0) {
      fail(ErrorCode::InvalidMatrix, "mapping matrix entries must be >= 0");
    }
  }
}

MappingMatrix MappingMatrix::from_rows(const std::vector<std::vector<Int>>& rws) {
  if (rws.empty() || rws[0].empty()) {
    fail(ErrorCode::InvalidMatrix, "mapping matrix must have positive shape");
  }
  std::vector<Int> flat;
  for (const auto& row : rws) {
    if (row.size() != rws[0].size()) {
      fail(ErrorCode::InvalidMatrix, "ragged mapping matrix rows");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return MappingMatrix(rws.size(), rws[0].size(), std::move(flat));
}

bool MappingMatrix::row_positive() const {
  for (std::size_t r = 0; r < rows; ++r) {
    bool pos = false;
    for (std::size_t c = 0; c < cols && !pos; ++c) pos = at(r, c) > 0;
    if (!pos) return false;
  }
  return true;
}

bool MappingMatrix::col_positive() const {
  for (std::size_t c = 0; c < cols; ++c) {
    bool pos = false;
    for (std::size_t r = 0; r < rows && !pos; ++r) pos = at(r, c) > 0;
    if (!pos) return false;
  }
  return true;
}

DimensionVector MappingMatrix::apply(const DimensionVector& v) const {
  if (v.size() != cols) {
    fail(ErrorCode::ShapeMismatch,
         "mapping matrix has " + std::to_string(cols) + " columns, vector has " +
             std::to_string(v.size()) + " entries");
  }
  std::vector<Int> out(rows, Int(0));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[r] += at(r, c) * v[c];
  }
  return DimensionVector(std::move(out));
}

bool MappingMatrix::operator==(const MappingMatrix& o) const {
  return rows == o.rows && cols == o.cols && entries == o.entries;
}

bool MappingMatrix::lex_less(const MappingMatrix& o) const {
  if (rows != o.rows) return rows < o.rows;
  if (cols != o.cols) return cols < o.cols;
  return entries < o.entries;
}

std::string MappingMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows; ++r) {
    if (r) os << "; ";
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) os << " ";
      os << at(r, c).str();
    }
  }
  os << "]";
  return os.str();
}

MappingMatrix product(const MappingMatrix& g, const MappingMatrix& h) {
  if (g.cols != h.rows) {
    fail(ErrorCode::ShapeMismatch,
         "cannot compose: " + std::to_string(g.cols) + " columns vs " +
             std::to_string(h.rows) + " rows");
  }
  MappingMatrix out(g.rows, h.cols);
  for (std::size_t r = 0; r < g.rows; ++r) {
    for (std::size_t k = 0; k < g.cols; ++k) {
      const Int& grk = g.at(r, k);
      if (grk == 0) continue;
      for (std::size_t c = 0; c < h.cols; ++c) {
        out.at(r, c) += grk * h.at(k, c);
      }
    }
  }
  return out;
}

Int gcd_int(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace afembed
