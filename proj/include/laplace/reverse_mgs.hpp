#pragma once

#include <cmath>
#include <string>

#include "laplace/matrix.hpp"

namespace laplace {

/// QL factors produced by the reverse modified Gram-Schmidt sweep, without
/// normalizing the surviving columns.
///
///   A = orthogonal * unit_lower = (orthogonal * D^{-1/2}) * L,
///
/// where D = diag(norms2), the columns of `orthogonal` are mutually
/// orthogonal with squared norms `norms2`, `unit_lower` has a unit diagonal
/// and L = D^{1/2} * unit_lower has diagonal sqrt(norms2).
struct QLFactors {
  DenseMatrix orthogonal;
  Vector norms2;
  DenseMatrix L;
  DenseMatrix unit_lower;
};

/// Reverse modified Gram-Schmidt by row: eliminate the last column first,
/// projecting every earlier column orthogonally to it, and repeat on the
/// shrunk block. The surviving column at each level lands in `orthogonal`.
/// Column order matters: the variable of interest must be placed first.
inline QLFactors reverse_mgs(const DenseMatrix& a) {
  const std::size_t s = a.rows(), n = a.cols();
  detail::require(s >= n, "reverse_mgs: need at least as many rows as columns");
  detail::require_finite(a.data(), "reverse_mgs: input");

  DenseMatrix work = a;          // columns get projected in place
  QLFactors f{DenseMatrix(s, n), Vector(n, 0.0), DenseMatrix(n, n), DenseMatrix(n, n)};
  f.orthogonal.column_labels = a.column_labels;

  double max_norm2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s; ++k) acc += work(k, j) * work(k, j);
    max_norm2 = std::max(max_norm2, acc);
  }
  const double rank_tol = 1e-13 * max_norm2;

  for (std::size_t kk = n; kk-- > 0;) {
    double nsq = 0.0;
    for (std::size_t k = 0; k < s; ++k) nsq += work(k, kk) * work(k, kk);
    if (!std::isfinite(nsq) || !(nsq > rank_tol)) {
      throw std::domain_error("reverse_mgs: column '" + a.column_labels[kk] + "' (index " +
                              std::to_string(kk + 1) + ") is rank deficient: projected squared norm " +
                              std::to_string(nsq) + " below tolerance " + std::to_string(rank_tol));
    }
    f.norms2[kk] = nsq;
    for (std::size_t k = 0; k < s; ++k) f.orthogonal(k, kk) = work(k, kk);
    const double root = std::sqrt(nsq);
    f.unit_lower(kk, kk) = 1.0;
    f.L(kk, kk) = root;
    for (std::size_t j = 0; j < kk; ++j) {
      double cross = 0.0;
      for (std::size_t k = 0; k < s; ++k) cross += work(k, kk) * work(k, j);
      const double coef = cross / nsq;
      f.unit_lower(kk, j) = coef;
      f.L(kk, j) = root * coef;
      for (std::size_t k = 0; k < s; ++k) work(k, j) -= coef * work(k, kk);
    }
  }
  return f;
}

/// The three terms of the squared-norm split under one projection step:
///   ||A u||² = ||A₁ u_head||² + ||l||² (u_n + lᵀ(A_head u_head)/||l||²)²
/// with l the last column and A₁ the remaining columns projected orthogonal
/// to l. `total` equals `projected + eliminated` up to roundoff.
struct PythagoreanSplit {
  double total;
  double projected;
  double eliminated;
};

inline PythagoreanSplit pythagorean_split(const DenseMatrix& a, const Vector& u) {
  detail::require(u.size() == a.cols(), "pythagorean_split: u length must equal column count");
  const std::size_t s = a.rows(), n = a.cols();
  PythagoreanSplit out{0.0, 0.0, 0.0};
  out.total = norm2_squared(matvec(a, u));

  Vector last(s);
  for (std::size_t k = 0; k < s; ++k) last[k] = a(k, n - 1);
  const double lnorm2 = norm2_squared(last);
  detail::require(lnorm2 > 0.0, "pythagorean_split: last column is zero");

  // head = A_head * u_head
  Vector head(s, 0.0);
  for (std::size_t k = 0; k < s; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) acc += a(k, j) * u[j];
    head[k] = acc;
  }
  const double cross = dot(last, head) / lnorm2;

  // projected head block: A₁ u_head = head - l (lᵀ head / ||l||²)
  double projected = 0.0;
  for (std::size_t k = 0; k < s; ++k) {
    const double v = head[k] - last[k] * cross;
    projected += v * v;
  }
  out.projected = projected;

  const double shifted = u[n - 1] + cross;
  out.eliminated = lnorm2 * shifted * shifted;
  return out;
}

}  // namespace laplace
