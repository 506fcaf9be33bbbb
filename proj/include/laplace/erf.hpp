#pragma once

#include <cmath>

namespace laplace {

// Rational Chebyshev approximations for erf/erfc after W. J. Cody
// (Math. Comp. 23, 1969), the CALERF coefficient set. Three regimes:
// |x| <= 0.46875 a direct erf form, up to 4 an exp(-x²)-scaled rational,
// beyond 4 the asymptotic form in 1/x². Absolute error is far below the
// 1e-12 this library promises; the complement path keeps small Gaussian
// tails accurate where 1 - erf(x) would cancel.

namespace detail {

inline constexpr double kErfA[5] = {3.16112374387056560e+00, 1.13864154151050156e+02,
                                    3.77485237685302021e+02, 3.20937758913846947e+03,
                                    1.85777706184603153e-01};
inline constexpr double kErfB[4] = {2.36012909523441209e+01, 2.44024637934444173e+02,
                                    1.28261652607737228e+03, 2.84423683343917062e+03};
inline constexpr double kErfC[9] = {5.64188496988670089e-01, 8.88314979438837594e+00,
                                    6.61191906371416295e+01, 2.98635138197400131e+02,
                                    8.81952221241769090e+02, 1.71204761263407058e+03,
                                    2.05107837782607147e+03, 1.23033935479799725e+03,
                                    2.15311535474403846e-08};
inline constexpr double kErfD[8] = {1.57449261107098347e+01, 1.17693950891312499e+02,
                                    5.37181101862009858e+02, 1.62138957456669019e+03,
                                    3.29079923573345963e+03, 4.36261909014324716e+03,
                                    3.43936767414372164e+03, 1.23033935480374942e+03};
inline constexpr double kErfP[6] = {3.05326634961232344e-01, 3.60344899949804439e-01,
                                    1.25781726111229246e-01, 1.60837851487422766e-02,
                                    6.58749161529837803e-04, 1.63153871373020978e-02};
inline constexpr double kErfQ[5] = {2.56852019228982242e+00, 1.87295284992346047e+00,
                                    5.27905102951428412e-01, 6.05183413124413191e-02,
                                    2.33520497626869185e-03};

inline constexpr double kInvSqrtPi = 5.6418958354775628695e-01;

// erf(x) for |x| <= 0.46875
inline double erf_small(double x) {
  const double z = x * x;
  double num = kErfA[4] * z;
  double den = z;
  for (int i = 0; i < 3; ++i) {
    num = (num + kErfA[i]) * z;
    den = (den + kErfB[i]) * z;
  }
  return x * (num + kErfA[3]) / (den + kErfB[3]);
}

// exp(-y²) with the split trick that keeps the scaled rational accurate
inline double exp_neg_square(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

// erfc(y) for y > 0.46875
inline double erfc_positive(double y) {
  if (y > 26.6) return 0.0;  // below double underflow
  if (y <= 4.0) {
    double num = kErfC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kErfC[i]) * y;
      den = (den + kErfD[i]) * y;
    }
    return exp_neg_square(y) * (num + kErfC[7]) / (den + kErfD[7]);
  }
  const double z = 1.0 / (y * y);
  double num = kErfP[5] * z;
  double den = z;
  for (int i = 0; i < 4; ++i) {
    num = (num + kErfP[i]) * z;
    den = (den + kErfQ[i]) * z;
  }
  double r = z * (num + kErfP[4]) / (den + kErfQ[4]);
  r = (kInvSqrtPi - r) / y;
  return exp_neg_square(y) * r;
}

}  // namespace detail

inline double gauss_erfc(double x) {
  const double y = std::fabs(x);
  if (y <= 0.46875) return 1.0 - detail::erf_small(x);
  const double tail = detail::erfc_positive(y);
  return x < 0.0 ? 2.0 - tail : tail;
}

inline double gauss_erf(double x) {
  const double y = std::fabs(x);
  if (y <= 0.46875) return detail::erf_small(x);
  const double r = 1.0 - detail::erfc_positive(y);
  return x < 0.0 ? -r : r;
}

}  // namespace laplace
