#include "afembed/ultrasim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "afembed/error.hpp"

namespace afembed {

namespace {

double default_tol(double tol, double bound) {
  return tol >= 0.0 ? tol : kDefaultUltraTol * std::max(1.0, bound);
}

void check_same_family(const UltraElement& x, const UltraElement& y) {
  if (x.terms.size() != y.terms.size()) {
    fail(ErrorCode::InvalidSequence, "elements belong to different families");
  }
  for (std::size_t i = 0; i < x.terms.size(); ++i) {
    if (!x.terms[i].same_dims(y.terms[i])) {
      fail(ErrorCode::InvalidSequence, "elements belong to different families");
    }
  }
}

}  // namespace

IndexedFamily::IndexedFamily(std::vector<FdAlgebra> algs, int w)
    : algebras(std::move(algs)), window(w) {
  if (window < 3) fail(ErrorCode::InvalidSequence, "window must be at least 3");
  if (truncation() < window) {
    fail(ErrorCode::InvalidSequence, "truncation must be at least the window length");
  }
}

void IndexedFamily::check_element(const UltraElement& x) const {
  if (x.terms.size() != algebras.size()) {
    fail(ErrorCode::InvalidSequence, "element length does not match the family");
  }
  if (!(x.declared_bound >= 0.0)) {
    fail(ErrorCode::InvalidSequence, "declared bound must be nonnegative");
  }
  for (std::size_t i = 0; i < x.terms.size(); ++i) {
    if (x.terms[i].dims() != algebras[i].realized_dims()) {
      std::ostringstream os;
      os << "term " << i + 1 << " does not live in its algebra";
      fail(ErrorCode::InvalidSequence, os.str());
    }
    const double norm = x.terms[i].op_norm();
    if (norm > x.declared_bound + 1e-12) {
      std::ostringstream os;
      os << "term " << i + 1 << " has norm " << norm << " above the declared bound "
         << x.declared_bound;
      fail(ErrorCode::InvalidSequence, os.str());
    }
  }
}

UltraElement ue_add(const UltraElement& x, const UltraElement& y) {
  check_same_family(x, y);
  UltraElement z;
  z.declared_bound = x.declared_bound + y.declared_bound;
  z.terms.reserve(x.terms.size());
  for (std::size_t i = 0; i < x.terms.size(); ++i) z.terms.push_back(x.terms[i] + y.terms[i]);
  return z;
}

UltraElement ue_sub(const UltraElement& x, const UltraElement& y) {
  return ue_add(x, ue_scale(y, cplx(-1.0, 0.0)));
}

UltraElement ue_mul(const UltraElement& x, const UltraElement& y) {
  check_same_family(x, y);
  UltraElement z;
  z.declared_bound = x.declared_bound * y.declared_bound;
  z.terms.reserve(x.terms.size());
  for (std::size_t i = 0; i < x.terms.size(); ++i) z.terms.push_back(x.terms[i] * y.terms[i]);
  return z;
}

UltraElement ue_adjoint(const UltraElement& x) {
  UltraElement z;
  z.declared_bound = x.declared_bound;
  z.terms.reserve(x.terms.size());
  for (const BlockMatrix& t : x.terms) z.terms.push_back(t.adjoint());
  return z;
}

UltraElement ue_scale(const UltraElement& x, cplx s) {
  UltraElement z;
  z.declared_bound = x.declared_bound * std::abs(s);
  z.terms.reserve(x.terms.size());
  for (const BlockMatrix& t : x.terms) z.terms.push_back(t * s);
  return z;
}

UpNormReport up_norm_report(const IndexedFamily& fam, const UltraElement& x, double tol) {
  fam.check_element(x);
  const int t = fam.truncation();
  const int w = fam.window;

  // Least-squares fit norm_i = a + b/i over the window; the constant a is
  // the only part that survives the limit, the residual decides whether the
  // truncation has settled into that profile at all.
  double s00 = 0.0, s01 = 0.0, s11 = 0.0, t0 = 0.0, t1 = 0.0;
  std::vector<double> norms(w);
  for (int k = 0; k < w; ++k) {
    const int i = t - w + k + 1;  // 1-based sequence index
    const double u = 1.0 / i;
    const double y = x.terms[i - 1].op_norm();
    norms[k] = y;
    s00 += 1.0;
    s01 += u;
    s11 += u * u;
    t0 += y;
    t1 += y * u;
  }
  const double det = s00 * s11 - s01 * s01;  // > 0: distinct nodes, w >= 3
  double a = (s11 * t0 - s01 * t1) / det;
  const double b = (s00 * t1 - s01 * t0) / det;
  if (a < 0.0) a = 0.0;  // a models a norm limit

  UpNormReport rep;
  rep.value = a;
  rep.drift = b;
  rep.tol = default_tol(tol, x.declared_bound);
  for (int k = 0; k < w; ++k) {
    const int i = t - w + k + 1;
    rep.max_residual = std::max(rep.max_residual, std::abs(norms[k] - (a + b / i)));
  }
  rep.converged = rep.max_residual <= rep.tol;
  return rep;
}

double up_norm(const IndexedFamily& fam, const UltraElement& x, double tol) {
  const UpNormReport rep = up_norm_report(fam, x, tol);
  if (!rep.converged) {
    std::ostringstream os;
    os << "window norms deviate from a tail profile by " << rep.max_residual
       << " (tolerance " << rep.tol << "): the truncation does not determine the limit";
    fail(ErrorCode::NonConvergent, os.str());
  }
  return rep.value;
}

bool pi_equal(const IndexedFamily& fam, const UltraElement& x, const UltraElement& y,
              double tol) {
  const UltraElement diff = ue_sub(x, y);
  const double eff = default_tol(tol, x.declared_bound + y.declared_bound);
  return up_norm(fam, diff, eff) <= eff;
}

QuotientReport quotient_algebra_check(const IndexedFamily& fam,
                                      const std::vector<UltraElement>& samples,
                                      double tol) {
  if (samples.empty()) fail(ErrorCode::EmptyFamily, "no samples supplied");
  double bound = 1.0;
  for (const UltraElement& x : samples) {
    fam.check_element(x);
    bound = std::max(bound, x.declared_bound);
  }
  QuotientReport rep;
  rep.tol = default_tol(tol, bound);
  for (const UltraElement& x : samples) {
    const double nx = up_norm(fam, x, -1.0);
    const double nxs = up_norm(fam, ue_adjoint(x), -1.0);
    const double nxx = up_norm(fam, ue_mul(x, ue_adjoint(x)), -1.0);
    rep.adjoint_gap = std::max(rep.adjoint_gap, std::abs(nxs - nx));
    const double scale = (1.0 + nx) * (1.0 + nx);
    rep.cstar_residual = std::max(rep.cstar_residual, std::abs(nxx - nx * nx) / scale);
    for (const UltraElement& y : samples) {
      const double ny = up_norm(fam, y, -1.0);
      const double nxy = up_norm(fam, ue_mul(x, y), -1.0);
      const double nsum = up_norm(fam, ue_add(x, y), -1.0);
      rep.submult_excess = std::max(rep.submult_excess, nxy - nx * ny);
      rep.triangle_excess = std::max(rep.triangle_excess, nsum - nx - ny);
    }
  }
  rep.ok = rep.cstar_residual <= rep.tol && rep.submult_excess <= rep.tol &&
           rep.triangle_excess <= rep.tol && rep.adjoint_gap <= rep.tol;
  return rep;
}

LiftAlongResult lift_units_along(const IndexedFamily& fam,
                                 const std::vector<AlmostMatrixUnits>& candidates) {
  if (candidates.size() != fam.algebras.size()) {
    fail(ErrorCode::ShapeMismatch, "one unit candidate required per family index");
  }
  LiftAlongResult out;
  out.lifted.resize(candidates.size());
  out.defects.resize(candidates.size(), 0.0);
  int first_bad_tail = 0;  // last index whose lift failed, 1-based
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].ambient_dims != fam.algebras[i].realized_dims()) {
      std::ostringstream os;
      os << "candidate " << i + 1 << " does not live in its algebra";
      fail(ErrorCode::ShapeMismatch, os.str());
    }
    if (!(candidates[i].system_dims == candidates[0].system_dims)) {
      fail(ErrorCode::ShapeMismatch, "candidates target different dimension vectors");
    }
    std::vector<int> n;
    for (const Int& e : candidates[i].system_dims.entries) {
      n.push_back(static_cast<int>(to_checked_int64(e, "block size")));
    }
    out.defects[i] =
        MatrixUnitSystem(n, candidates[i].ambient_dims, candidates[i].units).relation_defect();
    try {
      out.lifted[i] = lift_matrix_units(candidates[i]);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ShapeMismatch || e.code() == ErrorCode::InvalidDimension) {
        throw;  // malformed input, not a numerical inadmissibility
      }
      first_bad_tail = static_cast<int>(i) + 1;
    }
  }
  if (first_bad_tail >= fam.truncation()) {
    fail(ErrorCode::NeverAdmissible,
         "no tail index admits the matrix-unit repair at this truncation");
  }
  out.threshold_index = first_bad_tail + 1;
  return out;
}

MergeResult conjugacy_merge(const std::vector<int>& ambient_dims,
                            const std::vector<std::vector<BlockMatrix>>& phi_levels,
                            const std::vector<std::vector<BlockMatrix>>& psi_levels,
                            const std::vector<BlockMatrix>& unitaries,
                            double tol) {
  if (phi_levels.size() != psi_levels.size()) {
    fail(ErrorCode::ShapeMismatch, "the two towers have different depths");
  }
  if (unitaries.empty()) fail(ErrorCode::EmptyFamily, "no intertwiners supplied");
  for (std::size_t l = 0; l < phi_levels.size(); ++l) {
    if (phi_levels[l].size() != psi_levels[l].size()) {
      fail(ErrorCode::ShapeMismatch, "generator counts differ at a level");
    }
    for (const BlockMatrix& g : phi_levels[l]) {
      if (g.dims() != ambient_dims) fail(ErrorCode::ShapeMismatch, "generator off-ambient");
    }
    for (const BlockMatrix& g : psi_levels[l]) {
      if (g.dims() != ambient_dims) fail(ErrorCode::ShapeMismatch, "generator off-ambient");
    }
  }
  const BlockMatrix one = BlockMatrix::identity(ambient_dims);

  MergeResult best;
  for (std::size_t m = 0; m < unitaries.size(); ++m) {
    const BlockMatrix& u = unitaries[m];
    if (u.dims() != ambient_dims) fail(ErrorCode::ShapeMismatch, "intertwiner off-ambient");
    const double unit_defect = std::max((u.adjoint() * u - one).op_norm(),
                                        (u * u.adjoint() - one).op_norm());
    std::size_t level = 0;
    double defect = unit_defect;
    if (unit_defect <= tol) {
      for (std::size_t l = 0; l < phi_levels.size(); ++l) {
        double worst = 0.0;
        for (std::size_t g = 0; g < phi_levels[l].size(); ++g) {
          const BlockMatrix resid =
              u.adjoint() * phi_levels[l][g] * u - psi_levels[l][g];
          worst = std::max(worst, resid.op_norm());
        }
        if (worst > tol) break;
        level = l + 1;
        defect = std::max(defect, worst);
      }
    }
    if (m == 0 || level > best.achieved_level) {
      best.best_index = m;
      best.achieved_level = level;
      best.defect_at_best = defect;
    }
  }
  return best;
}

}  // namespace afembed
