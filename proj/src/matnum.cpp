#include "afembed/matnum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "afembed/error.hpp"

namespace afembed {

namespace {

constexpr double kRelationGate = 1e-2;
constexpr double kProjectionGate = 0.125;
constexpr double kGapBand = 1e-12;

BlockMatrix hermitian_part(const BlockMatrix& m) {
  return (m + m.adjoint()) * cplx(0.5, 0.0);
}

double indicator_above_half(double t) { return t > 0.5 ? 1.0 : 0.0; }

void check_projection_input(const BlockMatrix& p, const char* name) {
  if (!p.is_hermitian(1e-8)) {
    fail(ErrorCode::InvalidMatrix, std::string(name) + " is not Hermitian");
  }
  if ((p * p - p).op_norm() > 1e-8) {
    fail(ErrorCode::InvalidMatrix, std::string(name) + " is not a projection");
  }
}

long long integral_rank(const BlockMatrix& p) {
  double tr = 0.0;
  for (std::size_t b = 0; b < p.num_blocks(); ++b) tr += p.block(b).trace().real();
  const double rounded = std::round(tr);
  if (std::abs(tr - rounded) > 1e-6) {
    std::ostringstream os;
    os << "corrected projection has non-integral rank " << tr;
    fail(ErrorCode::InconsistentDimensions, os.str());
  }
  return static_cast<long long>(rounded);
}

}  // namespace

double h_gap_function(double t) {
  constexpr double lo = 1.0 / 3.0;
  constexpr double hi = 2.0 / 3.0;
  if (t <= lo) return 0.0;
  if (t >= hi) return 1.0 / std::sqrt(t);
  // linear ramp from 0 at 1/3 to hi^{-1/2} at 2/3
  return (t - lo) * 3.0 / std::sqrt(hi);
}

AlmostProjection::AlmostProjection(BlockMatrix m) : x(std::move(m)) {
  const double scale = std::max(1.0, x.op_norm());
  if (!x.is_hermitian(1e-12 * scale)) {
    fail(ErrorCode::NotHermitian, "almost projection must be Hermitian");
  }
  defect = (x * x - x).op_norm();
}

BlockMatrix correct_projection(const AlmostProjection& x) {
  if (x.defect > kProjectionGate) {
    std::ostringstream os;
    os << "projection defect " << x.defect << " exceeds " << kProjectionGate;
    fail(ErrorCode::DefectTooLarge, os.str());
  }
  return func_calc(x.x, indicator_above_half);
}

BlockMatrix lift_partial_isometry(const BlockMatrix& b, const BlockMatrix& p,
                                  const BlockMatrix& p_prime) {
  if (!b.same_dims(p) || !b.same_dims(p_prime)) {
    fail(ErrorCode::ShapeMismatch, "operand and projections live in different algebras");
  }
  check_projection_input(p, "initial projection");
  check_projection_input(p_prime, "final projection");

  const BlockMatrix a = p_prime * b * p;
  const BlockMatrix x = a.adjoint() * a;
  for (std::size_t k = 0; k < x.num_blocks(); ++k) {
    if (x.block(k).empty()) continue;
    const SpectralDecomposition s = hermitian_eig(x.block(k));
    for (double lam : s.eigenvalues) {
      if (lam > 1.0 / 3.0 + kGapBand && lam < 2.0 / 3.0 - kGapBand) {
        std::ostringstream os;
        os << "eigenvalue " << lam << " of the defect operator lies in (1/3, 2/3)";
        fail(ErrorCode::SpectrumInGap, os.str());
      }
    }
  }
  return a * func_calc(x, h_gap_function);
}

Mat correct_near_contraction(const Mat& v) {
  const double norm = operator_norm(v);
  if (norm > 1.5) {
    std::ostringstream os;
    os << "operator norm " << norm << " exceeds the near-contraction bound 1.5";
    fail(ErrorCode::NotNearContraction, os.str());
  }
  const Mat gram = v.adjoint() * v;
  const Mat damp = func_calc(gram, [](double t) {
    return t <= 1.0 ? 1.0 : 1.0 / std::sqrt(t);
  });
  return v * damp;
}

MatrixUnitSystem lift_matrix_units(const AlmostMatrixUnits& almost) {
  const std::size_t num_blocks = almost.system_dims.size();
  if (almost.units.size() != num_blocks) {
    fail(ErrorCode::ShapeMismatch, "one unit family required per block");
  }
  std::vector<int> n(num_blocks);
  for (std::size_t k = 0; k < num_blocks; ++k) {
    n[k] = static_cast<int>(to_checked_int64(almost.system_dims.entries[k], "block size"));
    if (almost.units[k].size() != static_cast<std::size_t>(n[k]) * n[k]) {
      fail(ErrorCode::ShapeMismatch, "unit family size must be the block size squared");
    }
    for (const BlockMatrix& u : almost.units[k]) {
      if (u.dims() != almost.ambient_dims) {
        fail(ErrorCode::ShapeMismatch, "unit candidates live in different algebras");
      }
    }
  }

  // Gate on the multiplicative and adjoint relations. The unitality gap is
  // not gated here: it is resolved structurally below, so rank clashes
  // surface as INCONSISTENT_DIMENSIONS rather than a blunt defect error.
  {
    MatrixUnitSystem candidate(n, almost.ambient_dims, almost.units);
    const double defect = candidate.relation_defect_no_unit();
    if (defect > kRelationGate) {
      std::ostringstream os;
      os << "matrix unit relations are off by " << defect << ", gate is " << kRelationGate;
      fail(ErrorCode::DefectTooLarge, os.str());
    }
  }

  // Correct the diagonal projections working in shrinking corners so they
  // come out mutually orthogonal; the last one is forced to close the sum,
  // which is where a rank mismatch becomes visible.
  const BlockMatrix one = BlockMatrix::identity(almost.ambient_dims);
  std::vector<std::pair<std::size_t, int>> diag_order;
  for (std::size_t k = 0; k < num_blocks; ++k) {
    for (int i = 0; i < n[k]; ++i) diag_order.emplace_back(k, i);
  }
  std::vector<std::vector<BlockMatrix>> proj(num_blocks);
  for (std::size_t k = 0; k < num_blocks; ++k) proj[k].resize(n[k]);
  BlockMatrix used = BlockMatrix::zeros(almost.ambient_dims);
  for (std::size_t r = 0; r < diag_order.size(); ++r) {
    const auto [k, i] = diag_order[r];
    if (r + 1 == diag_order.size()) {
      proj[k][i] = one - used;
      break;
    }
    const BlockMatrix corner = one - used;
    const BlockMatrix d = hermitian_part(almost.units[k][i * n[k] + i]);
    proj[k][i] = correct_projection(AlmostProjection(corner * d * corner));
    used += proj[k][i];
  }

  // Rank bookkeeping against the requested dimension vector.
  long long total = 0;
  for (std::size_t k = 0; k < num_blocks; ++k) {
    const long long m_k = integral_rank(proj[k][0]);
    if (m_k < 1) {
      fail(ErrorCode::InconsistentDimensions, "a diagonal projection collapsed to rank 0");
    }
    for (int i = 1; i < n[k]; ++i) {
      if (integral_rank(proj[k][i]) != m_k) {
        std::ostringstream os;
        os << "diagonal ranks within block " << k << " disagree, so the sum of "
           << "the candidates cannot be the identity over this dimension vector";
        fail(ErrorCode::InconsistentDimensions, os.str());
      }
    }
    total += m_k * n[k];
  }
  int ambient_total = 0;
  for (int d : almost.ambient_dims) ambient_total += d;
  if (total != ambient_total) {
    fail(ErrorCode::InconsistentDimensions, "block multiplicities do not fill the algebra");
  }

  // First-column partial isometries, then the full system as u_i u_j^*.
  std::vector<std::vector<BlockMatrix>> units(num_blocks);
  for (std::size_t k = 0; k < num_blocks; ++k) {
    std::vector<BlockMatrix> u(n[k]);
    u[0] = proj[k][0];
    for (int i = 1; i < n[k]; ++i) {
      u[i] = lift_partial_isometry(almost.units[k][i * n[k]], proj[k][0], proj[k][i]);
      if ((u[i].adjoint() * u[i] - proj[k][0]).op_norm() > 1e-8 ||
          (u[i] * u[i].adjoint() - proj[k][i]).op_norm() > 1e-8) {
        fail(ErrorCode::InconsistentDimensions,
             "a column candidate does not connect its corrected corners at full rank");
      }
    }
    units[k].resize(static_cast<std::size_t>(n[k]) * n[k]);
    for (int i = 0; i < n[k]; ++i) {
      for (int j = 0; j < n[k]; ++j) {
        units[k][i * n[k] + j] = u[i] * u[j].adjoint();
      }
    }
  }
  MatrixUnitSystem repaired(n, almost.ambient_dims, std::move(units));
  if (repaired.relation_defect() > 1e-10) {
    fail(ErrorCode::Internal, "repaired system misses the exactness target");
  }
  return repaired;
}

}  // namespace afembed
