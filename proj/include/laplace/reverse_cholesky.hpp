#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "laplace/matrix.hpp"

namespace laplace {

/// State of the shrinking system after eliminating down to `size` variables:
/// packed lower triangle of the leading block plus its reduced right-hand
/// side. Snapshot `size == n` is the input system itself.
struct EliminationStep {
  std::size_t size = 0;
  std::vector<double> lower;  // size*(size+1)/2, row-major
  Vector rhs;

  double lower_at(std::size_t i, std::size_t j) const {
    detail::require(j <= i && i < size, "EliminationStep: need j <= i < size");
    return lower[NormalSystem::packed_index(i, j)];
  }
  double entry(std::size_t i, std::size_t j) const {
    return i >= j ? lower_at(i, j) : lower_at(j, i);
  }
};

/// Reverse square-root-free Cholesky factors of AᵀA:
///
///   AᵀA = (D⁻¹ M)ᵀ M,   D = diag(M),   L = D^{-1/2} M,   LᵀL = AᵀA.
///
/// `m` holds the final lower triangle; its diagonal carries the successively
/// reduced squared column norms (entry (1,1) is the fully reduced pivot of
/// the leading variable). `reduced_rhs` is the right-hand side after the
/// fused backward reduction.
class ReverseCholesky {
 public:
  std::size_t n = 0;
  std::vector<double> m;  // packed lower
  Vector reduced_rhs;
  std::vector<EliminationStep> snapshots;  // sizes n, n-1, ..., 1 when recorded

  double m_at(std::size_t i, std::size_t j) const {
    detail::require(j <= i && i < n, "ReverseCholesky::m_at: need j <= i < n");
    return m[NormalSystem::packed_index(i, j)];
  }

  bool has_snapshots() const { return !snapshots.empty(); }

  const EliminationStep& snapshot(std::size_t size) const {
    detail::require(size >= 1 && size <= n, "ReverseCholesky::snapshot: size out of range");
    detail::require(has_snapshots(), "ReverseCholesky::snapshot: snapshots were not recorded");
    return snapshots[n - size];
  }
};

/// Laplace's elimination on the normal equations, exactly one symmetric
/// rank-1 update per step (k = n..2), lower triangle only, right-hand side
/// reduced on the fly. Updates sweep the triangle in row-major order and the
/// pivot divides at use; both are fixed so reruns are digit-identical.
inline ReverseCholesky factor(const NormalSystem& s, bool record_snapshots) {
  const std::size_t n = s.size();
  detail::require(s.rhs.size() == n, "factor: rhs length mismatch");

  ReverseCholesky f;
  f.n = n;
  f.m = s.packed();
  f.reduced_rhs = s.rhs;

  auto snap = [&](std::size_t size) {
    EliminationStep step;
    step.size = size;
    step.lower.assign(f.m.begin(), f.m.begin() + static_cast<std::ptrdiff_t>(size * (size + 1) / 2));
    step.rhs.assign(f.reduced_rhs.begin(), f.reduced_rhs.begin() + static_cast<std::ptrdiff_t>(size));
    f.snapshots.push_back(std::move(step));
  };
  if (record_snapshots) snap(n);

  auto at = [&f](std::size_t i, std::size_t j) -> double& {
    return f.m[NormalSystem::packed_index(i, j)];
  };

  for (std::size_t kk = n; kk-- > 1;) {
    const double piv = at(kk, kk);
    if (!(piv > 0.0)) {
      throw std::domain_error("factor: pivot for variable " + std::to_string(kk + 1) +
                              " is not positive (" + std::to_string(piv) +
                              "); system is not positive definite");
    }
    for (std::size_t i = 0; i < kk; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double t = at(kk, i) * at(kk, j);
        t = t / piv;
        at(i, j) = at(i, j) - t;
      }
    }
    for (std::size_t i = 0; i < kk; ++i) {
      double t = at(kk, i) * f.reduced_rhs[kk];
      t = t / piv;
      f.reduced_rhs[i] = f.reduced_rhs[i] - t;
    }
    if (record_snapshots) snap(kk);
  }
  if (!(at(0, 0) > 0.0)) {
    throw std::domain_error("factor: pivot for variable 1 is not positive (" +
                            std::to_string(at(0, 0)) + "); system is not positive definite");
  }
  return f;
}

inline ReverseCholesky factor(const NormalSystem& s) {
  // snapshots are cheap at desk scale; past 64 variables ask for them explicitly
  return factor(s, s.size() <= 64);
}

/// L = D^{-1/2} M with D = diag(M); LᵀL reproduces the input system.
inline DenseMatrix extract_L(const ReverseCholesky& f) {
  DenseMatrix l(f.n, f.n);
  for (std::size_t i = 0; i < f.n; ++i) {
    const double root = std::sqrt(f.m_at(i, i));
    for (std::size_t j = 0; j < i; ++j) l(i, j) = f.m_at(i, j) / root;
    l(i, i) = root;
  }
  return l;
}

/// Forward-solved leading variables; trailing entries stay unsolved and
/// reading one is an error (partial solves are the normal use).
struct Solution {
  Vector values;
  std::size_t solved_prefix = 0;

  double at(std::size_t i) const {
    if (i >= solved_prefix) {
      throw std::out_of_range("Solution: variable " + std::to_string(i + 1) +
                              " was not solved (solved prefix is " +
                              std::to_string(solved_prefix) + ")");
    }
    return values[i];
  }
};

inline Solution solve(const ReverseCholesky& f, std::size_t k) {
  detail::require(k >= 1 && k <= f.n, "solve: variable count out of range");
  Solution sol;
  sol.values.assign(f.n, 0.0);
  sol.solved_prefix = k;
  for (std::size_t j = 0; j < k; ++j) {
    double acc = f.reduced_rhs[j];
    for (std::size_t i = 0; i < j; ++i) acc -= f.m_at(j, i) * sol.values[i];
    sol.values[j] = acc / f.m_at(j, j);
  }
  return sol;
}

/// Recorded intermediate system with `size` remaining variables, symmetrized
/// for display.
inline std::pair<DenseMatrix, Vector> subsystem(const ReverseCholesky& f, std::size_t size) {
  const EliminationStep& step = f.snapshot(size);
  DenseMatrix m(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) m(i, j) = step.entry(i, j);
  return {std::move(m), step.rhs};
}

}  // namespace laplace
