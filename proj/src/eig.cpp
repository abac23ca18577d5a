#include "afembed/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace afembed {

namespace {

double off_diag_norm(const Mat& h) {
  double s = 0.0;
  for (int i = 0; i < h.rows(); ++i) {
    for (int j = 0; j < h.cols(); ++j) {
      if (i != j) s += std::norm(h.at(i, j));
    }
  }
  return std::sqrt(s);
}

}  // namespace

SpectralDecomposition hermitian_eig(const Mat& a, double tol_rel) {
  if (!a.square()) fail(ErrorCode::NotHermitian, "eigendecomposition needs a square matrix");
  const int n = a.rows();
  const double scale = std::max(a.frob_norm(), 1.0);
  if (!a.is_hermitian(1e-10 * scale)) {
    fail(ErrorCode::NotHermitian, "matrix is not Hermitian to working tolerance");
  }

  // Work on the exactly Hermitian part so roundoff in the input cannot
  // accumulate through the sweeps.
  Mat h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      h.at(i, j) = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
    }
  }
  Mat v = Mat::identity(n);

  const double target = tol_rel * std::max(h.frob_norm(), 1e-300);
  const int max_sweeps = 128;
  int sweep = 0;
  while (off_diag_norm(h) > target) {
    if (++sweep > max_sweeps) {
      fail(ErrorCode::Internal, "Jacobi eigensolver failed to converge");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = h.at(p, q);
        const double absapq = std::abs(apq);
        if (absapq <= 1e-2 * target / std::max(1, n)) continue;

        // Phase so that e^{-i phi} h_pq is real, then a real Jacobi angle.
        const cplx u = apq / absapq;  // e^{i phi}
        const double app = h.at(p, p).real();
        const double aqq = h.at(q, q).real();
        const double tau = (aqq - app) / (2.0 * absapq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Unitary on the (p,q) plane: col p <- c*col p - s*conj(u)*col q... see
        // below; chosen so that (U^* h U)_{pq} = 0.
        // U = [ c        s   ]
        //     [-s e^{-i phi}  c e^{-i phi} ]  acting on columns (p,q).
        const cplx upp = c;
        const cplx upq = s;
        const cplx uqp = -s * std::conj(u);
        const cplx uqq = c * std::conj(u);

        // h <- U^* h U.  First columns (h U), then rows (U^* h).
        for (int k = 0; k < n; ++k) {
          const cplx hkp = h.at(k, p);
          const cplx hkq = h.at(k, q);
          h.at(k, p) = hkp * upp + hkq * uqp;
          h.at(k, q) = hkp * upq + hkq * uqq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx hpk = h.at(p, k);
          const cplx hqk = h.at(q, k);
          h.at(p, k) = std::conj(upp) * hpk + std::conj(uqp) * hqk;
          h.at(q, k) = std::conj(upq) * hpk + std::conj(uqq) * hqk;
        }
        h.at(p, q) = 0.0;
        h.at(q, p) = 0.0;
        h.at(p, p) = h.at(p, p).real();
        h.at(q, q) = h.at(q, q).real();

        for (int k = 0; k < n; ++k) {
          const cplx vkp = v.at(k, p);
          const cplx vkq = v.at(k, q);
          v.at(k, p) = vkp * upp + vkq * uqp;
          v.at(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return h.at(i, i).real() < h.at(j, j).real();
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = h.at(order[j], order[j]).real();
    for (int i = 0; i < n; ++i) out.vectors.at(i, j) = v.at(i, order[j]);
  }
  return out;
}

Mat func_calc(const SpectralDecomposition& s, const std::function<double(double)>& f) {
  const int n = s.vectors.rows();
  Mat w = s.vectors;  // columns scaled by f(lambda)
  for (int j = 0; j < n; ++j) {
    const double fj = f(s.eigenvalues[j]);
    for (int i = 0; i < n; ++i) w.at(i, j) *= fj;
  }
  Mat r = w * s.vectors.adjoint();
  // Symmetrize: the result of a real function of a Hermitian matrix.
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx m = 0.5 * (r.at(i, j) + std::conj(r.at(j, i)));
      r.at(i, j) = m;
      r.at(j, i) = std::conj(m);
    }
  }
  return r;
}

Mat func_calc(const Mat& a, const std::function<double(double)>& f) {
  return func_calc(hermitian_eig(a), f);
}

double operator_norm(const Mat& a) {
  if (a.empty()) return 0.0;
  // Norm of a^* a equals ||a||^2; cheaper side first.
  const Mat g = a.rows() >= a.cols() ? a.adjoint() * a : a * a.adjoint();
  if (g.rows() == 1) return std::sqrt(std::max(0.0, g.at(0, 0).real()));
  SpectralDecomposition s = hermitian_eig(g);
  return std::sqrt(std::max(0.0, s.max_eigenvalue()));
}

}  // namespace afembed
