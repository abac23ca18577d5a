#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "afembed/dimension.hpp"
#include "afembed/divisibility.hpp"

namespace afembed {

// Inductive chain A_1 -> A_2 -> ... -> A_K with column-positive inclusion
// matrices satisfying inclusions[k] * dims(A_k) = dims(A_{k+1}).
struct BratteliChain {
  std::vector<FdAlgebra> algebras;
  std::vector<MappingMatrix> inclusions;

  std::size_t depth() const { return algebras.size(); }
};

// One morphism class out of a chain into a fixed target: gammas has one
// entry per level, gammas[k] * dims(A_k) = target and
// gammas[k+1] * inclusions[k] = gammas[k].
struct MatrixSequence {
  std::vector<MappingMatrix> gammas;
  DimensionVector target;

  // every level an inclusion matrix
  bool injective() const;
};

struct ValidationReport {
  bool valid = true;
  std::size_t failure_index = 0;  // first offending level, meaningful when invalid
  std::string message;
};

ValidationReport validate_chain(const BratteliChain& chain);

// Checks the two defining conditions exactly. Throws ShapeMismatch when the
// sequence length does not match the chain depth.
ValidationReport validate_matrix_sequence(const BratteliChain& chain,
                                          const MatrixSequence& seq);

// All conjugacy classes of unital morphisms from the depth-K stage into the
// target, as matrix sequences in lexicographic order of the deepest matrix.
// limit = 0 means unbounded.
std::vector<MatrixSequence> classify_morphisms(const BratteliChain& chain,
                                               const DimensionVector& target,
                                               std::size_t limit = 0);

// Back-propagates a deepest-level mapping matrix through the chain:
// gamma_k = gamma_deep * inclusions[K-2] * ... * inclusions[k].
MatrixSequence make_compatible(const BratteliChain& chain,
                               const MappingMatrix& gamma_deep);

struct EmbeddingDecision {
  bool embeds = false;
  std::optional<MatrixSequence> witness;
};

// The chain embeds unitally into the target iff the deepest dimension vector
// divides it; the witness sequence consists of inclusion matrices throughout.
EmbeddingDecision decide_embedding(const BratteliChain& chain,
                                   const DimensionVector& target);

// Unital embedding test for a UHF chain given by its matrix sizes. Throws
// NotAUhfChain unless the moduli form a divisibility chain.
bool uhf_check(const std::vector<Int>& moduli, const Int& big_n);

}  // namespace afembed
