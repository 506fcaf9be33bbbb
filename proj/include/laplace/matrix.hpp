#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace laplace {

using Vector = std::vector<double>;

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

inline void require_finite(const Vector& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + ": entries must be finite");
    }
  }
}

}  // namespace detail

/// Column labels in manuscript order (p, q, r, t, γ, λ), indexed past six.
inline std::vector<std::string> default_column_labels(std::size_t n) {
  static const char* named[6] = {"p", "q", "r", "t", "γ", "λ"};
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j < 6) {
      labels.emplace_back(named[j]);
    } else {
      labels.push_back("c" + std::to_string(j + 1));
    }
  }
  return labels;
}

/// Dense row-major matrix. Columns may carry role names; in the regression
/// role the matrix is s-by-n with s >= n.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols)
      : column_labels(default_column_labels(cols)),
        rows_(rows),
        cols_(cols),
        data_(rows * cols, 0.0) {
    detail::require(rows >= 1 && cols >= 1, "DenseMatrix: dimensions must be positive");
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  std::vector<std::string> column_labels;

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require(a.cols() == b.rows(), "matmul: inner dimensions must agree");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Vector matvec(const DenseMatrix& a, const Vector& x) {
  detail::require(x.size() == a.cols(), "matvec: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

inline double dot(const Vector& a, const Vector& b) {
  detail::require(a.size() == b.size(), "dot: dimension mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

inline double norm2_squared(const Vector& v) { return dot(v, v); }

/// Packed symmetric system of normal equations: lower triangle of AᵀA stored
/// row-major (row i holds i+1 entries), right-hand side Aᵀb, the observation
/// count s, and (once known) the residual sum of squares S ε'².
class NormalSystem {
 public:
  explicit NormalSystem(std::size_t n) : rhs(n, 0.0), n_(n), lower_(n * (n + 1) / 2, 0.0) {
    detail::require(n >= 1, "NormalSystem: size must be positive");
  }

  std::size_t size() const { return n_; }

  static std::size_t packed_index(std::size_t i, std::size_t j) {
    return i * (i + 1) / 2 + j;
  }

  double& lower(std::size_t i, std::size_t j) {
    detail::require(j <= i && i < n_, "NormalSystem::lower: need j <= i < n");
    return lower_[packed_index(i, j)];
  }
  double lower(std::size_t i, std::size_t j) const {
    detail::require(j <= i && i < n_, "NormalSystem::lower: need j <= i < n");
    return lower_[packed_index(i, j)];
  }

  /// Symmetric view: entry(i, j) == entry(j, i).
  double entry(std::size_t i, std::size_t j) const {
    return i >= j ? lower(i, j) : lower(j, i);
  }

  const std::vector<double>& packed() const { return lower_; }
  std::vector<double>& packed() { return lower_; }

  DenseMatrix full_matrix() const {
    DenseMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = entry(i, j);
    return m;
  }

  static NormalSystem from_dense(const DenseMatrix& sym, Vector rhs_values) {
    detail::require(sym.rows() == sym.cols(), "NormalSystem::from_dense: matrix must be square");
    detail::require(rhs_values.size() == sym.rows(), "NormalSystem::from_dense: rhs length mismatch");
    NormalSystem s(sym.rows());
    for (std::size_t i = 0; i < sym.rows(); ++i)
      for (std::size_t j = 0; j <= i; ++j) s.lower(i, j) = sym(i, j);
    s.rhs = std::move(rhs_values);
    return s;
  }

  /// Symmetric swap of variables a and b (rows/columns and rhs entries).
  NormalSystem with_swapped(std::size_t a, std::size_t b) const {
    detail::require(a < n_ && b < n_, "NormalSystem::with_swapped: index out of range");
    DenseMatrix full = full_matrix();
    for (std::size_t k = 0; k < n_; ++k) std::swap(full(a, k), full(b, k));
    for (std::size_t k = 0; k < n_; ++k) std::swap(full(k, a), full(k, b));
    NormalSystem out = from_dense(full, rhs);
    std::swap(out.rhs[a], out.rhs[b]);
    out.observations = observations;
    out.residual_sum_squares = residual_sum_squares;
    return out;
  }

  Vector rhs;
  std::size_t observations = 0;
  std::optional<double> residual_sum_squares;

 private:
  std::size_t n_;
  std::vector<double> lower_;
};

/// Forms the normal equations AᵀA x = Aᵀb. Inner products accumulate in
/// observation order 0..s-1 (fixed order keeps reruns digit-identical).
/// `compensated` switches the accumulation to Kahan summation, same order.
inline NormalSystem gram(const DenseMatrix& a, const Vector& b, bool compensated = false) {
  detail::require(b.size() == a.rows(), "gram: observation vector length must equal row count");
  detail::require_finite(a.data(), "gram: regression matrix");
  detail::require_finite(b, "gram: observations");
  const std::size_t s = a.rows(), n = a.cols();
  auto inner = [&](auto&& term) {
    if (!compensated) {
      double acc = 0.0;
      for (std::size_t k = 0; k < s; ++k) acc += term(k);
      return acc;
    }
    double acc = 0.0, carry = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
      const double y = term(k) - carry;
      const double t = acc + y;
      carry = (t - acc) - y;
      acc = t;
    }
    return acc;
  };
  NormalSystem sys(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      sys.lower(i, j) = inner([&](std::size_t k) { return a(k, i) * a(k, j); });
    }
    sys.rhs[i] = inner([&](std::size_t k) { return a(k, i) * b[k]; });
  }
  sys.observations = s;
  return sys;
}

/// Residual e' = Ax - b and its squared norm.
inline std::pair<Vector, double> residual(const DenseMatrix& a, const Vector& x, const Vector& b) {
  detail::require(x.size() == a.cols() && b.size() == a.rows(), "residual: dimension mismatch");
  Vector e(a.rows(), 0.0);
  double norm2 = 0.0;
  for (std::size_t k = 0; k < a.rows(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(k, j) * x[j];
    e[k] = acc - b[k];
    norm2 += e[k] * e[k];
  }
  return {std::move(e), norm2};
}

/// Direct inverse of the (SPD) normal matrix: diagonal equilibration, then
/// Gauss-Jordan with partial pivoting on the scaled matrix. Test oracle and
/// cross-check path only; deliberately a different algorithm family from the
/// elimination under test.
inline DenseMatrix invert_spd(const NormalSystem& s) {
  const std::size_t n = s.size();
  Vector scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = s.lower(i, i);
    if (!(d > 0.0)) {
      throw std::domain_error("invert_spd: diagonal entry " + std::to_string(i + 1) +
                              " is not positive (" + std::to_string(d) + ")");
    }
    scale[i] = 1.0 / std::sqrt(d);
  }
  // augmented [D S D | I]
  std::vector<Vector> aug(n, Vector(2 * n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = s.entry(i, j) * scale[i] * scale[j];
    aug[i][n + i] = 1.0;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot_row = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(aug[r][c]) > std::fabs(aug[pivot_row][c])) pivot_row = r;
    std::swap(aug[c], aug[pivot_row]);
    const double piv = aug[c][c];
    if (!(std::fabs(piv) > 1e-300)) {
      throw std::domain_error("invert_spd: singular pivot at column " + std::to_string(c + 1));
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = aug[r][c] / piv;
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < 2 * n; ++k) aug[r][k] -= f * aug[c][k];
    }
    const double inv_piv = 1.0 / piv;
    for (std::size_t k = 0; k < 2 * n; ++k) aug[c][k] *= inv_piv;
  }
  DenseMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug[i][n + j] * scale[i] * scale[j];
  // symmetrize away pivoting asymmetry
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = inv(j, i) = v;
    }
  return inv;
}

}  // namespace laplace
