#include "afembed/qdcert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "afembed/eig.hpp"
#include "afembed/error.hpp"

namespace afembed {

namespace {

// Modified Gram-Schmidt; returns an orthonormal basis of the column span.
// Throws when a column is (numerically) dependent on the previous ones.
Mat orthonormalize(const Mat& k_basis) {
  const int d = k_basis.rows();
  const int m = k_basis.cols();
  if (m < 1 || m > d) {
    fail(ErrorCode::DegenerateSubspace, "subspace basis must have 1..dim columns");
  }
  Mat q(d, m);
  for (int c = 0; c < m; ++c) {
    std::vector<cplx> v(d);
    double orig = 0.0;
    for (int i = 0; i < d; ++i) {
      v[i] = k_basis.at(i, c);
      orig += std::norm(v[i]);
    }
    orig = std::sqrt(orig);
    for (int prev = 0; prev < c; ++prev) {
      cplx inner = 0.0;
      for (int i = 0; i < d; ++i) inner += std::conj(q.at(i, prev)) * v[i];
      for (int i = 0; i < d; ++i) v[i] -= inner * q.at(i, prev);
    }
    double rest = 0.0;
    for (int i = 0; i < d; ++i) rest += std::norm(v[i]);
    rest = std::sqrt(rest);
    if (rest <= 1e-8 * std::max(1.0, orig)) {
      std::ostringstream os;
      os << "basis column " << c + 1 << " is dependent on the previous ones";
      fail(ErrorCode::DegenerateSubspace, os.str());
    }
    for (int i = 0; i < d; ++i) q.at(i, c) = v[i] / rest;
  }
  return q;
}

Mat coordinate_basis(int d, const std::vector<int>& coords) {
  Mat k(d, static_cast<int>(coords.size()));
  for (std::size_t c = 0; c < coords.size(); ++c) k.at(coords[c], static_cast<int>(c)) = 1.0;
  return k;
}

struct SearchState {
  const std::vector<Mat>* elements = nullptr;
  long long budget = 0;
  long long spent = 0;
  QdCertificate best;
  bool have_best = false;

  // Evaluates one candidate; returns false once the budget is exhausted.
  bool consider(const Mat& basis) {
    if (spent >= budget) return false;
    ++spent;
    QdCertificate cert;
    try {
      cert = certify(*elements, basis);
    } catch (const Error&) {
      return true;  // degenerate candidate, charged to the budget
    }
    if (!have_best || cert.epsilon_achieved < best.epsilon_achieved) {
      best = std::move(cert);
      have_best = true;
    }
    return spent < budget;
  }
};

}  // namespace

QdCertificate certify(const std::vector<Mat>& elements, const Mat& k_basis) {
  if (elements.empty()) fail(ErrorCode::EmptyFamily, "no elements to certify");
  const int d = elements.front().rows();
  for (const Mat& x : elements) {
    if (x.rows() != d || x.cols() != d) {
      fail(ErrorCode::ShapeMismatch, "elements live in different algebras");
    }
  }
  if (k_basis.rows() != d) {
    fail(ErrorCode::ShapeMismatch, "subspace basis has the wrong ambient dimension");
  }
  const Mat q = orthonormalize(k_basis);

  QdCertificate cert;
  cert.ambient_dim = d;
  cert.subspace_dim = q.cols();
  cert.projection = q * q.adjoint();
  cert.per_element.reserve(elements.size());
  for (const Mat& x : elements) {
    QdCertificate::ElementReport r;
    r.norm = operator_norm(x);
    r.compression_norm = operator_norm(q.adjoint() * x * q);
    r.commutator_norm = operator_norm(x * cert.projection - cert.projection * x);
    cert.epsilon_achieved = std::max(
        cert.epsilon_achieved, std::max(r.norm - r.compression_norm, r.commutator_norm));
    cert.per_element.push_back(r);
  }
  return cert;
}

QdCertificate search_subspace(const std::vector<Mat>& elements, int max_dim,
                              long long budget, std::uint64_t seed) {
  if (elements.empty()) fail(ErrorCode::EmptyFamily, "no elements to certify");
  const int d = elements.front().rows();
  if (max_dim < 1 || max_dim > d) {
    fail(ErrorCode::ShapeMismatch, "subspace dimension must be between 1 and the ambient");
  }
  if (budget < 1) fail(ErrorCode::InvalidSequence, "budget must be positive");

  SearchState state;
  state.elements = &elements;
  state.budget = budget;
  std::mt19937_64 rng(seed);

  // Per-element peak coordinates: for each element the coordinate pair
  // carrying its largest entry. Nails diagonal and permutation-like inputs.
  {
    std::vector<int> coords;
    for (const Mat& x : elements) {
      double bestmag = -1.0;
      int bi = 0, bj = 0;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (std::abs(x.at(i, j)) > bestmag) {
            bestmag = std::abs(x.at(i, j));
            bi = i;
            bj = j;
          }
        }
      }
      coords.push_back(bi);
      coords.push_back(bj);
    }
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    if (static_cast<int>(coords.size()) <= max_dim &&
        !state.consider(coordinate_basis(d, coords))) {
      return state.best;
    }
  }

  // Coordinates ranked by total row+column mass across the family.
  {
    std::vector<double> mass(d, 0.0);
    for (const Mat& x : elements) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          const double a = std::abs(x.at(i, j));
          mass[i] += a;
          mass[j] += a;
        }
      }
    }
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return mass[a] > mass[b]; });
    for (int m = 1; m <= max_dim; ++m) {
      std::vector<int> coords(order.begin(), order.begin() + m);
      std::sort(coords.begin(), coords.end());
      if (!state.consider(coordinate_basis(d, coords))) return state.best;
    }
  }

  // Eigenvector clusters of Hermitian combinations: the Gram sum and a few
  // seeded random mixtures (which generically split joint eigenspaces of a
  // commuting family).
  {
    std::vector<Mat> hermitians;
    Mat gram(d, d);
    for (const Mat& x : elements) gram += x.adjoint() * x;
    hermitians.push_back(gram);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
      Mat h(d, d);
      for (const Mat& x : elements) {
        const cplx c(unit(rng), unit(rng));
        h += x * c + x.adjoint() * std::conj(c);
      }
      hermitians.push_back(h);
    }
    for (const Mat& h : hermitians) {
      const SpectralDecomposition s = hermitian_eig(h);
      const double scale = std::max(std::abs(s.eigenvalues.front()),
                                    std::abs(s.eigenvalues.back()));
      // contiguous clusters of nearly equal eigenvalues
      std::vector<std::pair<int, int>> clusters;  // [lo, hi)
      int lo = 0;
      for (int i = 1; i <= d; ++i) {
        if (i == d || s.eigenvalues[i] - s.eigenvalues[i - 1] > 1e-8 * std::max(1.0, scale)) {
          clusters.emplace_back(lo, i);
          lo = i;
        }
      }
      // order clusters by the magnitude of their eigenvalues, largest first
      std::stable_sort(clusters.begin(), clusters.end(),
                       [&](const auto& a, const auto& b) {
                         const double ma = std::max(std::abs(s.eigenvalues[a.first]),
                                                    std::abs(s.eigenvalues[a.second - 1]));
                         const double mb = std::max(std::abs(s.eigenvalues[b.first]),
                                                    std::abs(s.eigenvalues[b.second - 1]));
                         return ma > mb;
                       });
      std::vector<int> taken;
      for (const auto& [clo, chi] : clusters) {
        if (static_cast<int>(taken.size()) + (chi - clo) > max_dim) continue;
        for (int i = clo; i < chi; ++i) taken.push_back(i);
        Mat basis(d, static_cast<int>(taken.size()));
        for (std::size_t c = 0; c < taken.size(); ++c) {
          for (int i = 0; i < d; ++i) basis.at(i, static_cast<int>(c)) = s.vectors.at(i, taken[c]);
        }
        if (!state.consider(basis)) return state.best;
      }
      // plain top-m eigenvector prefixes from both ends of the spectrum
      for (int m = 1; m <= max_dim; ++m) {
        Mat top(d, m);
        Mat bottom(d, m);
        for (int c = 0; c < m; ++c) {
          for (int i = 0; i < d; ++i) {
            top.at(i, c) = s.vectors.at(i, d - 1 - c);
            bottom.at(i, c) = s.vectors.at(i, c);
          }
        }
        if (!state.consider(top)) return state.best;
        if (!state.consider(bottom)) return state.best;
      }
    }
  }

  // Krylov spans: breadth-first images of seeded vectors under the family.
  {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<std::vector<cplx>> basis;  // orthonormal, grown greedily
      std::vector<std::vector<cplx>> queue;
      std::vector<cplx> seed_vec(d);
      if (trial == 0) {
        seed_vec[0] = 1.0;
      } else {
        for (int i = 0; i < d; ++i) seed_vec[i] = cplx(gauss(rng), gauss(rng));
      }
      queue.push_back(std::move(seed_vec));
      for (std::size_t head = 0; head < queue.size() && basis.size() < static_cast<std::size_t>(max_dim); ++head) {
        std::vector<cplx> v = queue[head];
        for (const auto& q : basis) {
          cplx inner = 0.0;
          for (int i = 0; i < d; ++i) inner += std::conj(q[i]) * v[i];
          for (int i = 0; i < d; ++i) v[i] -= inner * q[i];
        }
        double rest = 0.0;
        for (int i = 0; i < d; ++i) rest += std::norm(v[i]);
        rest = std::sqrt(rest);
        if (rest <= 1e-10) continue;
        for (int i = 0; i < d; ++i) v[i] /= rest;
        basis.push_back(v);
        Mat cand(d, static_cast<int>(basis.size()));
        for (std::size_t c = 0; c < basis.size(); ++c) {
          for (int i = 0; i < d; ++i) cand.at(i, static_cast<int>(c)) = basis[c][i];
        }
        if (!state.consider(cand)) return state.best;
        for (const Mat& x : elements) {
          std::vector<cplx> img(d, 0.0);
          for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) img[i] += x.at(i, j) * v[j];
          }
          queue.push_back(std::move(img));
        }
      }
    }
  }

  // Exhaustive coordinate subsets, smallest dimension first, lex order.
  for (int m = 1; m <= max_dim && state.spent < state.budget; ++m) {
    std::vector<int> coords(m);
    std::iota(coords.begin(), coords.end(), 0);
    for (;;) {
      if (!state.consider(coordinate_basis(d, coords))) return state.best;
      int pos = m - 1;
      while (pos >= 0 && coords[pos] == d - m + pos) --pos;
      if (pos < 0) break;
      ++coords[pos];
      for (int c = pos + 1; c < m; ++c) coords[c] = coords[c - 1] + 1;
    }
  }

  if (!state.have_best) fail(ErrorCode::Internal, "search evaluated no candidate");
  return state.best;
}

RfdSumResult rfd_sum(const std::vector<RealizedMorphism>& reps, std::size_t truncation,
                     const std::vector<BlockMatrix>& samples) {
  if (truncation == 0 || reps.empty()) {
    fail(ErrorCode::EmptyFamily, "need at least one representation");
  }
  if (truncation > reps.size()) {
    fail(ErrorCode::ShapeMismatch, "truncation exceeds the supplied representations");
  }
  const FdAlgebra& source = reps.front().source;
  std::vector<int> sum_dims;
  for (std::size_t f = 0; f < truncation; ++f) {
    const RealizedMorphism& rep = reps[f];
    if (!(rep.source.dims == source.dims)) {
      fail(ErrorCode::ShapeMismatch, "representations have different sources");
    }
    if (rep.target.dims.size() != 1) {
      fail(ErrorCode::ShapeMismatch, "each representation must land in one matrix block");
    }
    if (rep.units.relation_defect() > 1e-8) {
      std::ostringstream os;
      os << "representation " << f + 1 << " violates the matrix unit relations";
      fail(ErrorCode::NotAMorphism, os.str());
    }
    sum_dims.push_back(rep.target.realized_dims().front());
  }

  const std::vector<int> src_dims = source.realized_dims();
  RealizedMorphism sum;
  sum.source = source;
  {
    std::vector<Int> entries;
    for (int n : sum_dims) entries.emplace_back(n);
    sum.target = FdAlgebra{DimensionVector(std::move(entries))};
  }
  std::vector<std::vector<BlockMatrix>> units(src_dims.size());
  for (std::size_t k = 0; k < src_dims.size(); ++k) {
    const int nk = src_dims[k];
    units[k].reserve(static_cast<std::size_t>(nk) * nk);
    for (int i = 0; i < nk; ++i) {
      for (int j = 0; j < nk; ++j) {
        BlockMatrix img = BlockMatrix::zeros(sum_dims);
        for (std::size_t f = 0; f < truncation; ++f) {
          img.block(f) = reps[f].unit_image(k, i, j).block(0);
        }
        units[k].push_back(std::move(img));
      }
    }
  }
  sum.units = MatrixUnitSystem(src_dims, sum_dims, std::move(units));

  RfdSumResult out;
  out.separation.reserve(samples.size());
  for (const BlockMatrix& x : samples) {
    if (x.dims() != src_dims) {
      fail(ErrorCode::ShapeMismatch, "sample does not live in the source algebra");
    }
    RfdSumResult::SampleSeparation sep;
    sep.norm = x.op_norm();
    const BlockMatrix img = sum.apply(x);
    sep.image_norm = img.op_norm();
    for (std::size_t f = 0; f < truncation; ++f) {
      sep.per_rep.push_back(operator_norm(img.block(f)));
    }
    out.separation.push_back(std::move(sep));
  }
  out.direct_sum = std::move(sum);
  return out;
}

IsometryReport proper_isometry_obstruction(const Mat& v) {
  if (!v.square()) fail(ErrorCode::ShapeMismatch, "isometry check needs a square matrix");
  const Mat one = Mat::identity(v.rows());
  IsometryReport rep;
  rep.isometry_defect = operator_norm(v.adjoint() * v - one);
  rep.coisometry_defect = operator_norm(v * v.adjoint() - one);
  rep.isometry = rep.isometry_defect <= 1e-8;
  rep.proper = false;
  if (!rep.isometry) {
    rep.verdict = IsometryVerdict::NotAnIsometry;
    std::ostringstream os;
    os << "v*v is " << rep.isometry_defect << " away from the identity";
    rep.explanation = os.str();
  } else {
    rep.verdict = IsometryVerdict::Impossible;
    std::ostringstream os;
    os << "tr(v*v) = tr(vv*) forces vv* = 1 for a square isometry, so no proper "
       << "isometry exists here; vv* is " << rep.coisometry_defect
       << " from the identity";
    rep.explanation = os.str();
  }
  return rep;
}

}  // namespace afembed
