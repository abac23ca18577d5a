#pragma once

#include <optional>
#include <vector>

#include "afembed/algebra.hpp"
#include "afembed/block.hpp"
#include "afembed/dimension.hpp"
#include "afembed/matnum.hpp"

namespace afembed {

inline constexpr int kDefaultTruncation = 256;
inline constexpr int kDefaultWindow = 32;
inline constexpr double kDefaultUltraTol = 1e-6;

// Bounded sequence: one term per family index.
struct UltraElement {
  std::vector<BlockMatrix> terms;
  double declared_bound = 0.0;
};

// Finite truncation B_1..B_T of a sequence of finite-dimensional algebras,
// with a tail window used to read off limits. The window plays the role of
// the ultrafilter: limits are trusted only when the last W norms already
// follow a stable a + b/i profile.
struct IndexedFamily {
  std::vector<FdAlgebra> algebras;
  int window = kDefaultWindow;

  IndexedFamily(std::vector<FdAlgebra> algs, int w);

  int truncation() const { return static_cast<int>(algebras.size()); }

  // Throws InvalidSequence when terms do not match the family or exceed the
  // declared bound.
  void check_element(const UltraElement& x) const;
};

// termwise algebra on elements of one family
UltraElement ue_add(const UltraElement& x, const UltraElement& y);
UltraElement ue_sub(const UltraElement& x, const UltraElement& y);
UltraElement ue_mul(const UltraElement& x, const UltraElement& y);
UltraElement ue_adjoint(const UltraElement& x);
UltraElement ue_scale(const UltraElement& x, cplx s);

struct UpNormReport {
  double value = 0.0;         // fitted tail limit of the term norms
  double drift = 0.0;         // fitted 1/i coefficient
  double max_residual = 0.0;  // worst deviation of a window norm from the fit
  double tol = 0.0;
  bool converged = false;
};

// The norm of the class of x in the quotient: the window norms are fitted to
// a + b/i and the limit a is returned. A negative tol selects the default
// 1e-6 * max(1, declared_bound).
UpNormReport up_norm_report(const IndexedFamily& fam, const UltraElement& x,
                            double tol = -1.0);

// Same but throwing NonConvergent when the window does not determine a limit.
double up_norm(const IndexedFamily& fam, const UltraElement& x, double tol = -1.0);

// Equality in the quotient: the difference has vanishing tail norm.
bool pi_equal(const IndexedFamily& fam, const UltraElement& x, const UltraElement& y,
              double tol = -1.0);

struct QuotientReport {
  double cstar_residual = 0.0;    // | ||x x*|| - ||x||^2 | scaled residual
  double submult_excess = 0.0;    // positive part of ||xy|| - ||x|| ||y||
  double triangle_excess = 0.0;   // positive part of ||x+y|| - ||x|| - ||y||
  double adjoint_gap = 0.0;       // | ||x*|| - ||x|| |
  double tol = 0.0;
  bool ok = false;
};

// Spot-checks that the quotient behaves like a C*-algebra on the samples.
QuotientReport quotient_algebra_check(const IndexedFamily& fam,
                                      const std::vector<UltraElement>& samples,
                                      double tol = -1.0);

struct LiftAlongResult {
  int threshold_index = 0;  // 1-based first index from which every lift works
  std::vector<std::optional<MatrixUnitSystem>> lifted;  // per index
  std::vector<double> defects;                          // input defect per index
};

// Runs the matrix-unit repair at every index and reports the first index
// from which the whole tail is repairable. Throws NeverAdmissible when even
// the last index fails.
LiftAlongResult lift_units_along(const IndexedFamily& fam,
                                 const std::vector<AlmostMatrixUnits>& candidates);

struct MergeResult {
  std::size_t best_index = 0;      // 0-based index into the unitary list
  std::size_t achieved_level = 0;  // number of leading levels intertwined
  double defect_at_best = 0.0;
};

// Given generator images of two morphism towers and candidate intertwiners,
// picks the intertwiner that conjugates the longest initial run of levels to
// within tol. Levels are cumulative: level l counts only if levels 1..l all
// pass under the same unitary.
MergeResult conjugacy_merge(const std::vector<int>& ambient_dims,
                            const std::vector<std::vector<BlockMatrix>>& phi_levels,
                            const std::vector<std::vector<BlockMatrix>>& psi_levels,
                            const std::vector<BlockMatrix>& unitaries,
                            double tol = kDefaultUltraTol);

}  // namespace afembed
