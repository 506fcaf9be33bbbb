#pragma once

#include <algorithm>
#include <cmath>

#include "laplace/matrix.hpp"

namespace laplace {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Plenty for the desk-scale spectra this project needs (n <= a few dozen).
inline Vector jacobi_eigenvalues(DenseMatrix a, std::size_t max_sweeps = 64) {
  detail::require(a.rows() == a.cols(), "jacobi_eigenvalues: matrix must be square");
  const std::size_t n = a.rows();
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      diag += a(p, p) * a(p, p);
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off <= 1e-30 * std::max(diag, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = a(i, i);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

/// 2-norm condition number of a symmetric positive definite matrix.
inline double condition_number_spd(const DenseMatrix& a) {
  const Vector eigs = jacobi_eigenvalues(a);
  if (!(eigs.front() > 0.0)) {
    throw std::domain_error("condition_number_spd: matrix is not positive definite");
  }
  return eigs.back() / eigs.front();
}

}  // namespace laplace
