#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "afembed/algebra.hpp"
#include "afembed/block.hpp"
#include "afembed/matrix.hpp"

namespace afembed {

// One quasidiagonality check: how well the subspace K preserves the norms of
// the elements under compression while almost commuting with them.
struct QdCertificate {
  int ambient_dim = 0;
  int subspace_dim = 0;
  Mat projection;  // rank-subspace_dim orthogonal projection

  struct ElementReport {
    double norm = 0.0;
    double compression_norm = 0.0;  // ||Q* x Q||, never above norm
    double commutator_norm = 0.0;   // ||x P - P x||
  };
  std::vector<ElementReport> per_element;

  // max over elements of max(norm - compression_norm, commutator_norm)
  double epsilon_achieved = 0.0;
};

// Evaluates the certificate for the subspace spanned by the columns of
// k_basis (orthonormalized internally). Throws DegenerateSubspace when the
// columns are dependent beyond 1e-8.
QdCertificate certify(const std::vector<Mat>& elements, const Mat& k_basis);

// Heuristic search for a good subspace of dimension at most max_dim: per-
// element peak coordinates, ranked coordinate sets, eigenvector clusters of
// symmetrized combinations, Krylov spans from seeded vectors, then plain
// coordinate subsets until the budget (number of certificates evaluated)
// runs out. Deterministic for a fixed seed.
QdCertificate search_subspace(const std::vector<Mat>& elements, int max_dim,
                              long long budget, std::uint64_t seed = 1);

struct RfdSumResult {
  RealizedMorphism direct_sum;

  struct SampleSeparation {
    double norm = 0.0;              // norm of the sample upstairs
    double image_norm = 0.0;        // norm of its direct-sum image
    std::vector<double> per_rep;    // norm through each representation alone
  };
  std::vector<SampleSeparation> separation;
};

// Direct sum of the first `truncation` representations, with a per-sample
// separation profile showing which representations see which samples.
// Representations must share a source, land in single matrix blocks, and
// satisfy the matrix-unit relations to 1e-8.
RfdSumResult rfd_sum(const std::vector<RealizedMorphism>& reps, std::size_t truncation,
                     const std::vector<BlockMatrix>& samples);

enum class IsometryVerdict {
  NotAnIsometry,  // v*v differs from the identity
  Impossible,     // v*v = 1, hence vv* = 1 by the trace identity: not proper
};

struct IsometryReport {
  IsometryVerdict verdict = IsometryVerdict::NotAnIsometry;
  bool isometry = false;
  bool proper = false;  // always false on square matrices
  double isometry_defect = 0.0;    // ||v*v - 1||
  double coisometry_defect = 0.0;  // ||vv* - 1||
  std::string explanation;
};

// Decides whether a square matrix is a proper isometry; it never is, and the
// report carries the trace identity that forces this.
IsometryReport proper_isometry_obstruction(const Mat& v);

}  // namespace afembed
