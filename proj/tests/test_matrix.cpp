#include "doctest.h"

#include <stdexcept>

#include "laplace/matrix.hpp"
#include "laplace/reverse_cholesky.hpp"
#include "test_support.hpp"

using namespace laplace;

TEST_CASE("gram of the identity") {
  DenseMatrix a = DenseMatrix::identity(2);
  NormalSystem s = gram(a, {3.0, 4.0});
  CHECK(s.lower(0, 0) == 1.0);
  CHECK(s.lower(1, 1) == 1.0);
  CHECK(s.lower(1, 0) == 0.0);
  CHECK(s.rhs[0] == 3.0);
  CHECK(s.rhs[1] == 4.0);
  CHECK(s.observations == 2);
  CHECK_FALSE(s.residual_sum_squares.has_value());
}

TEST_CASE("gram matches the hand product and the brute-force oracle") {
  DenseMatrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 1;
  a(1, 0) = 0;
  a(1, 1) = 1;
  NormalSystem s = gram(a, {1.0, 1.0});
  CHECK(s.lower(0, 0) == 1.0);
  CHECK(s.lower(1, 0) == 1.0);
  CHECK(s.lower(1, 1) == 2.0);
  CHECK(s.rhs[0] == 1.0);
  CHECK(s.rhs[1] == 2.0);

  const DenseMatrix ata = matmul(transpose(a), a);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j <= i; ++j) CHECK(s.lower(i, j) == doctest::Approx(ata(i, j)));
}

TEST_CASE("gram accepts a duplicated column; the failure surfaces at factorization") {
  DenseMatrix a(3, 2);
  for (std::size_t i = 0; i < 3; ++i) a(i, 0) = a(i, 1) = static_cast<double>(i + 1);
  NormalSystem s = gram(a, {1.0, 2.0, 3.0});
  CHECK(s.lower(1, 0) == s.lower(0, 0));
  CHECK_THROWS_AS(factor(s), std::domain_error);
}

TEST_CASE("gram rejects dimension mismatch and non-finite input") {
  DenseMatrix a = DenseMatrix::identity(2);
  CHECK_THROWS_AS(gram(a, {1.0}), std::invalid_argument);
  a(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(gram(a, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("compensated accumulation keeps digits the plain order loses") {
  // 10^4 copies of 0.1: the plain running sum drifts ~1.6e-10, Kahan lands
  // on the correctly rounded 1000.0
  DenseMatrix a(10000, 1);
  for (std::size_t i = 0; i < 10000; ++i) a(i, 0) = 0.1;
  const Vector b(10000, 1.0);
  const double plain_sum = gram(a, b).rhs[0];
  const double comp_sum = gram(a, b, true).rhs[0];
  CHECK(std::fabs(plain_sum - 1000.0) > 1e-11);
  CHECK(comp_sum == 1000.0);

  // on benign data the two modes agree bit for bit
  DenseMatrix m(3, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = static_cast<double>(i + 2 * j + 1);
  const NormalSystem plain = gram(m, {1, 2, 3});
  const NormalSystem comp = gram(m, {1, 2, 3}, true);
  for (std::size_t k = 0; k < plain.packed().size(); ++k)
    CHECK(plain.packed()[k] == comp.packed()[k]);
}

TEST_CASE("residual handles the consistent and the hand case") {
  DenseMatrix a(2, 1);
  a(0, 0) = 1;
  a(1, 0) = 1;
  auto [e, n2] = residual(a, {1.0}, {0.0, 2.0});
  CHECK(e[0] == 1.0);
  CHECK(e[1] == -1.0);
  CHECK(n2 == 2.0);

  DenseMatrix id = DenseMatrix::identity(3);
  auto [e0, n0] = residual(id, {1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
  CHECK(n0 == 0.0);
  for (double v : e0) CHECK(v == 0.0);
}

TEST_CASE("least-squares residual is orthogonal to the columns") {
  auto gen = testsup::make_rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    const DenseMatrix a = testsup::random_regression(gen, 9, 4);
    const Vector b = testsup::random_vector(gen, 9);
    const NormalSystem s = gram(a, b);
    const Vector x = testsup::oracle_solve(s);
    const auto [e, n2] = residual(a, x, b);
    const Vector ate = matvec(transpose(a), e);
    double scale = 0.0;
    for (double v : b) scale = std::max(scale, std::fabs(v));
    scale *= testsup::max_abs(a) * static_cast<double>(a.rows());
    for (double v : ate) CHECK(std::fabs(v) <= 1e-10 * std::max(scale, 1.0));
    CHECK(n2 >= 0.0);
  }
}

TEST_CASE("invert_spd: identity, 2x2 closed form, manuscript 2x2 block") {
  NormalSystem id = NormalSystem::from_dense(DenseMatrix::identity(3), {0, 0, 0});
  const DenseMatrix inv_id = invert_spd(id);
  CHECK(testsup::matrix_rel_diff(inv_id, DenseMatrix::identity(3)) < 1e-14);

  DenseMatrix m(2, 2);
  m(0, 0) = 4;
  m(0, 1) = m(1, 0) = 2;
  m(1, 1) = 5;
  const DenseMatrix inv = invert_spd(NormalSystem::from_dense(m, {0, 0}));
  CHECK(inv(0, 0) == doctest::Approx(5.0 / 16.0).epsilon(1e-12));
  CHECK(inv(0, 1) == doctest::Approx(-2.0 / 16.0).epsilon(1e-12));
  CHECK(inv(1, 1) == doctest::Approx(4.0 / 16.0).epsilon(1e-12));

  DenseMatrix e(2, 2);
  e(0, 0) = 48442;
  e(0, 1) = e(1, 0) = 48020;
  e(1, 1) = 57725227;
  const double det = 48442.0 * 57725227.0 - 48020.0 * 48020.0;
  const DenseMatrix inv_e = invert_spd(NormalSystem::from_dense(e, {0, 0}));
  CHECK(inv_e(0, 0) == doctest::Approx(57725227.0 / det).epsilon(1e-10));
  CHECK(inv_e(0, 1) == doctest::Approx(-48020.0 / det).epsilon(1e-10));
  CHECK(inv_e(1, 1) == doctest::Approx(48442.0 / det).epsilon(1e-10));
}

TEST_CASE("invert_spd: inverse times input is the identity on random SPD") {
  auto gen = testsup::make_rng(202);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + gen() % 9;  // up to 10
    const NormalSystem s = testsup::random_spd_system(gen, n);
    const DenseMatrix prod = matmul(invert_spd(s), s.full_matrix());
    CHECK(testsup::matrix_rel_diff(prod, DenseMatrix::identity(n)) < 1e-10);
  }
}

TEST_CASE("invert_spd rejects a nonpositive diagonal") {
  DenseMatrix m = DenseMatrix::identity(2);
  m(1, 1) = 0.0;
  CHECK_THROWS_AS(invert_spd(NormalSystem::from_dense(m, {0, 0})), std::domain_error);
}

TEST_CASE("random gram matrices are positive definite in sampled directions") {
  auto gen = testsup::make_rng(303);
  for (int rep = 0; rep < 20; ++rep) {
    const DenseMatrix a = testsup::random_regression(gen, 10, 5);
    const NormalSystem s = gram(a, Vector(10, 0.0));
    const DenseMatrix full = s.full_matrix();
    for (int k = 0; k < 5; ++k) {
      const Vector x = testsup::random_vector(gen, 5);
      CHECK(dot(x, matvec(full, x)) > 0.0);
    }
  }
}

TEST_CASE("NormalSystem swap is a symmetric permutation") {
  auto gen = testsup::make_rng(404);
  const NormalSystem s = testsup::random_spd_system(gen, 5);
  const NormalSystem t = s.with_swapped(0, 3);
  CHECK(t.entry(0, 0) == s.entry(3, 3));
  CHECK(t.entry(3, 3) == s.entry(0, 0));
  CHECK(t.entry(0, 3) == s.entry(3, 0));
  CHECK(t.entry(0, 1) == s.entry(3, 1));
  CHECK(t.entry(2, 3) == s.entry(2, 0));
  CHECK(t.rhs[0] == s.rhs[3]);
  CHECK(t.rhs[3] == s.rhs[0]);
  // swapping back restores the original
  const NormalSystem u = t.with_swapped(0, 3);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j <= i; ++j) CHECK(u.lower(i, j) == s.lower(i, j));
}

TEST_CASE("default column labels follow the manuscript then index") {
  const auto labels = default_column_labels(8);
  CHECK(labels[0] == "p");
  CHECK(labels[3] == "t");
  CHECK(labels[4] == "γ");
  CHECK(labels[5] == "λ");
  CHECK(labels[6] == "c7");
  CHECK(labels[7] == "c8");
}
