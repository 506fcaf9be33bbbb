#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "laplace/jacobi.hpp"
#include "laplace/matrix.hpp"

// Shared generators and comparison helpers for the unit and acceptance
// suites. Everything is seeded, so failures reproduce.
namespace testsup {

using laplace::DenseMatrix;
using laplace::NormalSystem;
using laplace::Vector;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vector random_vector(std::mt19937_64& gen, std::size_t len, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Vector v(len);
  for (auto& x : v) x = dist(gen);
  return v;
}

/// Random full-rank regression matrix; rejects ill-conditioned draws via the
/// eigenvalue oracle so the suites' tolerances are meaningful.
inline DenseMatrix random_regression(std::mt19937_64& gen, std::size_t s, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  for (;;) {
    DenseMatrix a(s, n);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = dist(gen);
    const Vector eigs = laplace::jacobi_eigenvalues(laplace::gram(a, Vector(s, 0.0)).full_matrix());
    if (eigs.front() > 1e-6 * eigs.back()) return a;
  }
}

/// Random well-conditioned SPD system with a random right-hand side.
inline NormalSystem random_spd_system(std::mt19937_64& gen, std::size_t n,
                                      std::size_t extra_rows = 4) {
  const DenseMatrix a = random_regression(gen, n + extra_rows, n);
  const Vector b = random_vector(gen, n + extra_rows);
  return laplace::gram(a, b);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

inline double max_abs(const DenseMatrix& m) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v = std::max(v, std::fabs(m(i, j)));
  return v;
}

/// Largest entrywise difference scaled by the larger matrix magnitude.
inline double matrix_rel_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double diff = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) diff = std::max(diff, std::fabs(a(i, j) - b(i, j)));
  const double scale = std::max(max_abs(a), max_abs(b));
  return scale == 0.0 ? diff : diff / scale;
}

/// Independent least-squares path: normal equations inverted by the
/// Gauss-Jordan oracle, never the elimination under test.
inline Vector oracle_solve(const NormalSystem& s) {
  const DenseMatrix inv = laplace::invert_spd(s);
  return laplace::matvec(inv, s.rhs);
}

}  // namespace testsup
