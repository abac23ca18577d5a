#include "afembed/cpmaps.hpp"

#include <cmath>
#include <sstream>

#include "afembed/eig.hpp"
#include "afembed/error.hpp"
#include "afembed/matnum.hpp"

namespace afembed {

namespace {

constexpr double kKrausCutoff = 1e-12;
constexpr double kPsdTol = 1e-10;

// Off-block leak allowed when reading a target element out of the Choi.
constexpr double kBlockLeakTol = 1e-9;

void check_source_index(const CpMap& m, int i, int j) {
  if (i < 0 || j < 0 || i >= m.source_dim || j >= m.source_dim) {
    fail(ErrorCode::ShapeMismatch, "source matrix unit index out of range");
  }
}

}  // namespace

int CpMap::target_total() const {
  int total = 0;
  for (int d : target.realized_dims()) total += d;
  return total;
}

BlockMatrix CpMap::unit_image(int i, int j) const {
  check_source_index(*this, i, j);
  const int d = target_total();
  Mat dense(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) dense.at(a, b) = choi.at(i * d + a, j * d + b);
  }
  return BlockMatrix::from_dense(target.realized_dims(), dense, kBlockLeakTol);
}

BlockMatrix CpMap::apply(const Mat& x) const {
  if (x.rows() != source_dim || x.cols() != source_dim) {
    fail(ErrorCode::ShapeMismatch, "argument does not live in the source algebra");
  }
  const int d = target_total();
  Mat dense(d, d);
  for (int i = 0; i < source_dim; ++i) {
    for (int j = 0; j < source_dim; ++j) {
      const cplx c = x.at(i, j);
      if (c == cplx(0.0, 0.0)) continue;
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          dense.at(a, b) += c * choi.at(i * d + a, j * d + b);
        }
      }
    }
  }
  return BlockMatrix::from_dense(target.realized_dims(), dense, kBlockLeakTol);
}

BlockMatrix CpMap::unit() const { return apply(Mat::identity(source_dim)); }

CpMap choi_of(int source_dim, const FdAlgebra& target,
              const std::vector<BlockMatrix>& values) {
  if (source_dim < 1) fail(ErrorCode::InvalidDimension, "source dimension must be >= 1");
  if (values.size() != static_cast<std::size_t>(source_dim) * source_dim) {
    fail(ErrorCode::ShapeMismatch, "one value required per source matrix unit");
  }
  const std::vector<int> tdims = target.realized_dims();
  int d = 0;
  for (int t : tdims) d += t;
  CpMap m;
  m.source_dim = source_dim;
  m.target = target;
  m.choi = Mat(source_dim * d, source_dim * d);
  for (int i = 0; i < source_dim; ++i) {
    for (int j = 0; j < source_dim; ++j) {
      const BlockMatrix& v = values[static_cast<std::size_t>(i) * source_dim + j];
      if (v.dims() != tdims) {
        fail(ErrorCode::ShapeMismatch, "value does not live in the target algebra");
      }
      const Mat dense = v.to_dense();
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          m.choi.at(i * d + a, j * d + b) = dense.at(a, b);
        }
      }
    }
  }
  return m;
}

CpVerdict is_cp(const CpMap& m) {
  const SpectralDecomposition s = hermitian_eig(m.choi);
  CpVerdict v;
  v.min_eigenvalue = s.min_eigenvalue();
  v.cp = v.min_eigenvalue >= -kPsdTol;
  return v;
}

Mat StinespringData::represent(const Mat& x) const {
  if (x.rows() != source_dim || x.cols() != source_dim) {
    fail(ErrorCode::ShapeMismatch, "argument does not live in the source algebra");
  }
  Mat big(source_dim * multiplicity, source_dim * multiplicity);
  for (int i = 0; i < source_dim; ++i) {
    for (int j = 0; j < source_dim; ++j) {
      for (int r = 0; r < multiplicity; ++r) {
        big.at(i * multiplicity + r, j * multiplicity + r) = x.at(i, j);
      }
    }
  }
  return big;
}

Mat StinespringData::reconstruct(const Mat& x) const {
  return v.adjoint() * represent(x) * v;
}

StinespringData stinespring(const CpMap& m) {
  const CpVerdict verdict = is_cp(m);
  if (!verdict.cp) {
    std::ostringstream os;
    os << "Choi matrix has eigenvalue " << verdict.min_eigenvalue;
    fail(ErrorCode::NotCp, os.str());
  }
  const int n = m.source_dim;
  const int d = m.target_total();
  const SpectralDecomposition s = hermitian_eig(m.choi);

  StinespringData out;
  out.source_dim = n;
  for (std::size_t idx = 0; idx < s.eigenvalues.size(); ++idx) {
    const double lam = s.eigenvalues[idx];
    if (lam < kKrausCutoff) continue;
    const double w = std::sqrt(lam);
    Mat k(d, n);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < d; ++a) {
        k.at(a, i) = w * s.vectors.at(i * d + a, static_cast<int>(idx));
      }
    }
    out.kraus.push_back(std::move(k));
  }
  const int r = static_cast<int>(out.kraus.size());
  out.multiplicity = r;
  out.v = Mat(n * r, d);
  for (int alpha = 0; alpha < r; ++alpha) {
    const Mat& k = out.kraus[alpha];
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < d; ++a) {
        out.v.at(i * r + alpha, a) = std::conj(k.at(a, i));
      }
    }
  }
  return out;
}

namespace {

// Rebuilds a map from a dilation-side operator: x -> W* (x tensor 1_R) W.
CpMap map_from_dilation(const CpMap& shape, const StinespringData& stine, const Mat& w) {
  const int n = shape.source_dim;
  std::vector<BlockMatrix> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Mat e(n, n);
      e.at(i, j) = 1.0;
      StinespringData probe = stine;
      probe.v = w;
      const Mat img = probe.reconstruct(e);
      values.push_back(
          BlockMatrix::from_dense(shape.target.realized_dims(), img, kBlockLeakTol));
    }
  }
  return choi_of(n, shape.target, values);
}

}  // namespace

CpMap cp_near_contraction_fix(const CpMap& m) {
  const StinespringData stine = stinespring(m);  // throws NotCp when negative
  if (stine.multiplicity == 0) return m;         // the zero map
  const double norm = m.unit().op_norm();
  if (norm > 1.5) {
    std::ostringstream os;
    os << "map norm " << norm << " exceeds the near-contraction bound 1.5";
    fail(ErrorCode::NotNearContraction, os.str());
  }
  const Mat w = correct_near_contraction(stine.v);
  return map_from_dilation(m, stine, w);
}

CpMap unitalize(const CpMap& m) {
  const BlockMatrix a = m.unit();
  double bottom = 0.0;
  bool first = true;
  for (std::size_t k = 0; k < a.num_blocks(); ++k) {
    const SpectralDecomposition s = hermitian_eig(a.block(k));
    if (first || s.min_eigenvalue() < bottom) bottom = s.min_eigenvalue();
    first = false;
  }
  if (bottom < 1e-6) {
    std::ostringstream os;
    os << "image of the identity has bottom eigenvalue " << bottom;
    fail(ErrorCode::NotInvertibleUnitImage, os.str());
  }
  const BlockMatrix damp = func_calc(a, [](double t) { return 1.0 / std::sqrt(t); });
  const int n = m.source_dim;
  std::vector<BlockMatrix> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      values.push_back(damp * m.unit_image(i, j) * damp);
    }
  }
  return choi_of(n, m.target, values);
}

FactorizationReport matricial_factor_check(const CpMap& phi, const CpMap& psi,
                                           const CpMap& rho) {
  if (phi.source_dim != psi.source_dim) {
    fail(ErrorCode::ShapeMismatch, "outer and inner maps have different sources");
  }
  if (psi.target.dims.size() != 1 || psi.target_total() != rho.source_dim) {
    fail(ErrorCode::ShapeMismatch,
         "middle algebra must be one matrix block matching the second factor");
  }
  if (rho.target.realized_dims() != phi.target.realized_dims()) {
    fail(ErrorCode::ShapeMismatch, "second factor does not land in the right target");
  }
  FactorizationReport rep;
  const int n = phi.source_dim;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Mat mid = psi.unit_image(i, j).to_dense();
      const BlockMatrix diff = rho.apply(mid) - phi.unit_image(i, j);
      rep.residual = std::max(rep.residual, diff.op_norm());
    }
  }
  rep.psi_cp = is_cp(psi).cp;
  rep.rho_cp = is_cp(rho).cp;
  rep.psi_norm = psi.unit().op_norm();
  rep.rho_norm = rho.unit().op_norm();
  rep.valid = rep.residual <= 1e-8 && rep.psi_cp && rep.rho_cp &&
              rep.psi_norm <= 1.0 + 1e-8 && rep.rho_norm <= 1.0 + 1e-8;
  return rep;
}

}  // namespace afembed
