#pragma once

#include <cmath>
#include <string>

#include "laplace/erf.hpp"
#include "laplace/matrix.hpp"
#include "laplace/reverse_cholesky.hpp"

namespace laplace {

/// Weight of one regression variable in Laplace's sense: P = 1/(2σ²). The
/// larger the poids, the tighter the Gaussian marginal of that variable.
struct PoidsReport {
  std::size_t variable = 0;  // 0-based
  double poids = 0.0;
  double log10_poids = 0.0;
  double sigma = 0.0;
  double sigma_b2 = 0.0;  // noise variance estimate the poids is based on
};

/// Poids of the leading variable from a completed factorization:
/// P = s·m(1,1) / (2·Sε'²). The fully reduced pivot m(1,1) is the squared
/// norm of the leading column after all projections. With `unbiased` the
/// noise variance uses rss/(s-n) instead of rss/s.
inline PoidsReport poids_first(const ReverseCholesky& f, std::size_t s, double rss,
                               bool unbiased = false) {
  if (!(rss > 0.0)) {
    throw std::domain_error("poids_first: residual sum of squares must be positive");
  }
  detail::require(s > 0, "poids_first: observation count must be positive");
  detail::require(!unbiased || s > f.n, "poids_first: unbiased estimate needs s > n");
  const double dof = unbiased ? static_cast<double>(s - f.n) : static_cast<double>(s);
  const double pivot = f.m_at(0, 0);
  PoidsReport r;
  r.variable = 0;
  r.poids = dof * pivot / (2.0 * rss);
  r.log10_poids = std::log10(r.poids);
  r.sigma = 1.0 / std::sqrt(2.0 * r.poids);
  r.sigma_b2 = rss / dof;
  return r;
}

/// Poids/σ of variable j: swap it to the front (Laplace's letter swap),
/// refactor from scratch, and read the leading pivot. Equals
/// σ_b²-scaled 1/entry(j,j) of (AᵀA)⁻¹.
inline PoidsReport variance_for_variable(const NormalSystem& s, std::size_t j,
                                         bool unbiased = false) {
  detail::require(j < s.size(), "variance_for_variable: variable index out of range");
  detail::require(s.residual_sum_squares.has_value(),
                  "variance_for_variable: residual sum of squares is required");
  const NormalSystem permuted = s.with_swapped(0, j);
  const ReverseCholesky f = factor(permuted, false);
  PoidsReport r = poids_first(f, s.observations, *s.residual_sum_squares, unbiased);
  r.variable = j;
  return r;
}

/// Covariance of the two leading variables from the 2-by-2 stage of the
/// reduction: (rss/s) times the closed-form inverse of that block. Diagonal
/// entries are σ₁², σ₂².
inline DenseMatrix covariance_block2(const ReverseCholesky& f, std::size_t s, double rss) {
  detail::require(f.n >= 2, "covariance_block2: need at least two variables");
  detail::require(s > 0, "covariance_block2: observation count must be positive");
  if (!(rss > 0.0)) {
    throw std::domain_error("covariance_block2: residual sum of squares must be positive");
  }
  const EliminationStep& step = f.snapshot(2);
  const double a = step.lower_at(0, 0);
  const double b = step.lower_at(1, 0);
  const double c = step.lower_at(1, 1);
  const double det = a * c - b * b;
  if (!(det > 0.0) || !(a > 0.0)) {
    throw std::domain_error("covariance_block2: 2x2 stage is singular (det = " +
                            std::to_string(det) + ")");
  }
  const double scale = rss / static_cast<double>(s) / det;
  DenseMatrix cov(2, 2);
  cov(0, 0) = scale * c;
  cov(0, 1) = cov(1, 0) = -scale * b;
  cov(1, 1) = scale * a;
  return cov;
}

/// Probability query against the Gaussian marginal exp(-P u²):
/// Pr(|u| <= U) = erf(U √P).
struct ConfidenceQuery {
  double poids = 0.0;
  double half_width = 0.0;
};

inline double prob_within(const ConfidenceQuery& q) {
  detail::require(q.poids > 0.0, "prob_within: poids must be positive");
  detail::require(q.half_width >= 0.0, "prob_within: half width must be nonnegative");
  return gauss_erf(q.half_width * std::sqrt(q.poids));
}

/// Complement 1 - Pr(|u| <= U), computed through erfc so small tails keep
/// their digits.
inline double prob_outside(const ConfidenceQuery& q) {
  detail::require(q.poids > 0.0, "prob_outside: poids must be positive");
  detail::require(q.half_width >= 0.0, "prob_outside: half width must be nonnegative");
  return gauss_erfc(q.half_width * std::sqrt(q.poids));
}

/// Exponent coefficient of the leading variable's marginal density,
/// s·||p_{n-1}||²/(2||e'||²). This is the poids by definition; exposed under
/// its density-side name to make the identity explicit.
inline double marginal_density_coefficient(const ReverseCholesky& f, std::size_t s, double rss,
                                           bool unbiased = false) {
  return poids_first(f, s, rss, unbiased).poids;
}

/// Planetary mass (1+z)/base as a fraction of the solar mass, also reported
/// as "one part in denominator".
struct MassEstimate {
  double fraction = 0.0;
  double denominator = 0.0;
};

inline MassEstimate mass_from_correction(double z, double base) {
  detail::require(base > 0.0, "mass_from_correction: base must be positive");
  if (!(1.0 + z > 0.0)) {
    throw std::domain_error("mass_from_correction: correction " + std::to_string(z) +
                            " makes the mass nonpositive");
  }
  return {(1.0 + z) / base, base / (1.0 + z)};
}

}  // namespace laplace
