#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "afembed/error.hpp"

namespace afembed {

// Arbitrary-precision integer for dimension vectors and multiplicity
// matrices.  Targets of embedding questions can be astronomically large
// even though every concretely realized algebra stays desk-sized.
using Int = boost::multiprecision::cpp_int;

// Largest single matrix block we will materialize as a dense matrix.
inline constexpr std::int64_t kMaxRealizedDim = 4096;

std::int64_t to_checked_int64(const Int& v, const char* what);

// Dimension vector (n_1, ..., n_r) of a finite-dimensional C*-algebra
// M_{n_1} (+) ... (+) M_{n_r}.  All entries are >= 1.
struct DimensionVector {
  std::vector<Int> entries;

  DimensionVector() = default;
  explicit DimensionVector(std::vector<Int> e);
  DimensionVector(std::initializer_list<Int> e)
      : DimensionVector(std::vector<Int>(e)) {}

  std::size_t size() const { return entries.size(); }
  const Int& operator[](std::size_t i) const { return entries[i]; }

  bool operator==(const DimensionVector& o) const { return entries == o.entries; }
  bool operator!=(const DimensionVector& o) const { return !(*this == o); }

  std::string to_string() const;
};

// A finite-dimensional C*-algebra, identified with its dimension vector.
struct FdAlgebra {
  DimensionVector dims;

  FdAlgebra() = default;
  explicit FdAlgebra(DimensionVector d) : dims(std::move(d)) {}
  FdAlgebra(std::initializer_list<Int> e) : dims(e) {}

  std::size_t num_blocks() const { return dims.size(); }

  // Block sizes as machine integers, for dense realization.  Throws
  // SCALE_LIMIT if a block exceeds kMaxRealizedDim.
  std::vector<int> realized_dims() const;

  bool operator==(const FdAlgebra& o) const { return dims == o.dims; }
  bool operator!=(const FdAlgebra& o) const { return !(*this == o); }
};

// Nonnegative integer matrix of multiplicities.  Row r, column e gives the
// multiplicity with which source block e appears in target block r. Stored
// row-major.
struct MappingMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Int> entries;  // rows*cols, row-major

  MappingMatrix() = default;
  MappingMatrix(std::size_t r, std::size_t c);
  MappingMatrix(std::size_t r, std::size_t c, std::vector<Int> e);
  // Convenience: build from nested lists, validating rectangular shape.
  static MappingMatrix from_rows(const std::vector<std::vector<Int>>& rws);

  Int& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  const Int& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

  // Every row has a positive entry (unital morphism data).
  bool row_positive() const;
  // Every column has a positive entry (injective morphism data).
  bool col_positive() const;

  DimensionVector apply(const DimensionVector& v) const;

  bool operator==(const MappingMatrix& o) const;
  bool operator!=(const MappingMatrix& o) const { return !(*this == o); }
  // Flattened row-major lexicographic order; shapes compared first.
  bool lex_less(const MappingMatrix& o) const;

  std::string to_string() const;
};

// Matrix product: (g after h) has matrix product(g, h) = Lambda(g)*Lambda(h).
MappingMatrix product(const MappingMatrix& g, const MappingMatrix& h);

Int gcd_int(Int a, Int b);

}  // namespace afembed
