#pragma once

#include <optional>
#include <vector>

#include "afembed/dimension.hpp"

namespace afembed {

// Divisibility of dimension vectors: m | n iff some nonnegative integer
// matrix gamma with every row and every column positive satisfies
// gamma * m = n.  Such a gamma is exactly the multiplicity matrix of a
// unital embedding of the algebra with dimensions m into the one with
// dimensions n.
//
// divides returns the lexicographically least witness (row-major entry
// order) or nullopt.  Feasibility is decided exactly for arbitrarily large
// targets; only witness enumeration is inherently bounded.
std::optional<MappingMatrix> divides(const DimensionVector& m, const DimensionVector& n);

// All witnesses in ascending row-major lexicographic order, at most `limit`
// of them (limit = 0 means no bound; use with care).
std::vector<MappingMatrix> enumerate_witnesses(const DimensionVector& m,
                                               const DimensionVector& n,
                                               std::size_t limit);

// Nonnegative integer solutions x of sum_e x_e * coins_e = total, in
// ascending lexicographic order, at most `limit` (0 = unbounded).  Building
// block for morphism classification.
std::vector<std::vector<Int>> enumerate_row_solutions(const Int& total,
                                                      const std::vector<Int>& coins,
                                                      std::size_t limit);

}  // namespace afembed
