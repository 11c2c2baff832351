#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qent/errors.hpp"
#include "qent/linalg.hpp"
#include "qent/tolerances.hpp"

namespace qent {

namespace detail {

inline double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Eigenvalues of a Hermitian matrix by cyclic Jacobi with complex rotations.
// Each (p,q) rotation factors the 2x2 block as D(phase) * real-symmetric *
// D(phase)^dagger and applies the classic real Jacobi angle. Dimensions stay
// small (<= 64), so robustness beats speed here.
inline std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  if (m.rows() != m.cols()) throw NotHermitian("matrix is not square");
  if (m.rows() > 64) throw BadDim("eigensolver limited to dim <= 64");
  if (!m.is_hermitian()) throw NotHermitian("matrix is not Hermitian");

  const std::size_t d = m.rows();
  CMatrix a = m;
  // Symmetrize once so accumulated input noise cannot bias the sweeps.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) < tol.convergence) break;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const cplx z = a(p, q);
        const double r = std::abs(z);
        if (r < 1e-300) continue;
        const cplx f = z / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        // Small-magnitude root of t^2 - 2*tau*t - 1 = 0.
        const double t = (tau >= 0.0 ? -1.0 : 1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- A * J with J = [[f c, -f s], [s, c]] on columns (p, q).
        for (std::size_t k = 0; k < d; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = f * c * akp + s * akq;
          a(k, q) = -f * s * akp + c * akq;
        }
        // A <- J^dagger * A on rows (p, q).
        for (std::size_t k = 0; k < d; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(f) * c * apk + s * aqk;
          a(q, k) = -std::conj(f) * s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(d);
  for (std::size_t i = 0; i < d; ++i) eig[i] = a(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

// Trace norm sum |lambda_i| for a Hermitian matrix.
inline double trace_norm(const CMatrix& m) {
  double s = 0.0;
  for (double v : hermitian_eigenvalues(m)) s += std::abs(v);
  return s;
}

}  // namespace qent
