#include "doctest.h"

#include <cmath>

#include "laplace/reverse_cholesky.hpp"
#include "test_support.hpp"

using namespace laplace;

TEST_CASE("identity system factors to itself") {
  NormalSystem s = NormalSystem::from_dense(DenseMatrix::identity(3), {1.0, 2.0, 3.0});
  const ReverseCholesky f = factor(s);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(f.m_at(i, i) == 1.0);
    for (std::size_t j = 0; j < i; ++j) CHECK(f.m_at(i, j) == 0.0);
    CHECK(f.reduced_rhs[i] == s.rhs[i]);
  }
  CHECK(f.snapshots.size() == 3);
  CHECK(f.snapshot(3).size == 3);
  CHECK(f.snapshot(1).lower[0] == 1.0);
}

TEST_CASE("hand Schur complement of the 2x2 example") {
  DenseMatrix m(2, 2);
  m(0, 0) = 4;
  m(0, 1) = m(1, 0) = 2;
  m(1, 1) = 5;
  const ReverseCholesky f = factor(NormalSystem::from_dense(m, {1.0, 1.0}));
  CHECK(f.m_at(0, 0) == doctest::Approx(3.2).epsilon(1e-15));
  CHECK(f.reduced_rhs[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(f.m_at(1, 0) == 2.0);
  CHECK(f.m_at(1, 1) == 5.0);

  const DenseMatrix l = extract_L(f);
  CHECK(l(0, 0) == doctest::Approx(std::sqrt(3.2)).epsilon(1e-15));
  CHECK(l(1, 0) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(testsup::matrix_rel_diff(matmul(transpose(l), l), m) < 1e-15);
}

TEST_CASE("nonpositive pivots name the failing variable") {
  DenseMatrix zero(2, 2);
  CHECK_THROWS_WITH_AS(factor(NormalSystem::from_dense(zero, {0, 0})),
                       doctest::Contains("variable 2"), std::domain_error);

  DenseMatrix indef(2, 2);
  indef(0, 0) = 1;
  indef(0, 1) = indef(1, 0) = 2;
  indef(1, 1) = 1;
  CHECK_THROWS_WITH_AS(factor(NormalSystem::from_dense(indef, {0, 0})),
                       doctest::Contains("variable 1"), std::domain_error);
}

TEST_CASE("solve: identity, partial access, oracle agreement") {
  NormalSystem id = NormalSystem::from_dense(DenseMatrix::identity(3), {5.0, 6.0, 7.0});
  const ReverseCholesky f = factor(id);
  const Solution full = solve(f, 3);
  CHECK(full.at(0) == 5.0);
  CHECK(full.at(2) == 7.0);

  const Solution partial = solve(f, 2);
  CHECK(partial.at(1) == 6.0);
  CHECK_THROWS_AS(partial.at(2), std::out_of_range);
  CHECK_THROWS_AS(solve(f, 0), std::invalid_argument);
  CHECK_THROWS_AS(solve(f, 4), std::invalid_argument);

  auto gen = testsup::make_rng(12);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 2 + gen() % 7;
    const NormalSystem s = testsup::random_spd_system(gen, n);
    const ReverseCholesky f = factor(s);
    const Solution x = solve(f, n);
    const Vector ref = testsup::oracle_solve(s);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::fabs(x.at(i) - ref[i]) <= 1e-9 * std::max(1.0, std::fabs(ref[i])));
    }
    // substituting the leading variable back into the fully reduced equation
    CHECK(x.at(0) * f.m_at(0, 0) ==
          doctest::Approx(f.reduced_rhs[0]).epsilon(1e-15));
  }
}

TEST_CASE("subsystem returns the recorded stages, symmetrized") {
  auto gen = testsup::make_rng(23);
  const NormalSystem s = testsup::random_spd_system(gen, 4);
  const ReverseCholesky f = factor(s);
  const auto [top, rhs] = subsystem(f, 4);
  CHECK(testsup::matrix_rel_diff(top, s.full_matrix()) == 0.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(rhs[i] == s.rhs[i]);
  const auto [mid, rhs2] = subsystem(f, 2);
  CHECK(mid(0, 1) == mid(1, 0));
  CHECK(rhs2.size() == 2);
  CHECK_THROWS_AS(subsystem(f, 5), std::invalid_argument);
  CHECK_THROWS_AS(subsystem(f, 0), std::invalid_argument);
}

TEST_CASE("fused right-hand side reduction equals the separated reduction") {
  auto gen = testsup::make_rng(34);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 3 + gen() % 5;
    const NormalSystem s = testsup::random_spd_system(gen, n);
    const ReverseCholesky f = factor(s);
    // replay only the rhs recurrence against the frozen triangle
    Vector z = s.rhs;
    for (std::size_t kk = n; kk-- > 1;) {
      const double piv = f.m_at(kk, kk);
      for (std::size_t i = 0; i < kk; ++i) {
        double t = f.m_at(kk, i) * z[kk];
        t = t / piv;
        z[i] = z[i] - t;
      }
    }
    for (std::size_t i = 0; i < n; ++i) CHECK(z[i] == f.reduced_rhs[i]);
  }
}

TEST_CASE("each stage is the Schur complement of the input") {
  auto gen = testsup::make_rng(45);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t n = 3 + gen() % 4;
    const NormalSystem s = testsup::random_spd_system(gen, n);
    const ReverseCholesky f = factor(s);
    const DenseMatrix full = s.full_matrix();
    for (std::size_t size = n - 1; size >= 1; --size) {
      // direct block formula: A11 - A12 A22^{-1} A21
      const std::size_t t = n - size;
      DenseMatrix a22(t, t);
      for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j) a22(i, j) = full(size + i, size + j);
      DenseMatrix a12(size, t);
      for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < t; ++j) a12(i, j) = full(i, size + j);
      const DenseMatrix inv22 = invert_spd(NormalSystem::from_dense(a22, Vector(t, 0.0)));
      const DenseMatrix correction = matmul(matmul(a12, inv22), transpose(a12));
      const auto [stage, stage_rhs] = subsystem(f, size);
      for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) {
          const double expected = full(i, j) - correction(i, j);
          CHECK(std::fabs(stage(i, j) - expected) <=
                1e-9 * std::max(1.0, std::fabs(expected)));
        }
    }
  }
}

TEST_CASE("leading pivot never increases across stages") {
  auto gen = testsup::make_rng(56);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + gen() % 7;
    const NormalSystem s = testsup::random_spd_system(gen, n);
    const ReverseCholesky f = factor(s);
    double prev = f.snapshot(n).lower_at(0, 0);
    for (std::size_t size = n - 1; size >= 1; --size) {
      const double cur = f.snapshot(size).lower_at(0, 0);
      CHECK(cur <= prev * (1.0 + 1e-12));
      prev = cur;
    }
  }
}

TEST_CASE("fully reduced pivot is the reciprocal leading inverse entry") {
  auto gen = testsup::make_rng(67);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + gen() % 7;
    const NormalSystem s = testsup::random_spd_system(gen, n);
    const ReverseCholesky f = factor(s);
    const DenseMatrix inv = invert_spd(s);
    CHECK(f.m_at(0, 0) == doctest::Approx(1.0 / inv(0, 0)).epsilon(1e-9));
  }
}

TEST_CASE("snapshot recording policy") {
  NormalSystem small = NormalSystem::from_dense(DenseMatrix::identity(3), {0, 0, 0});
  CHECK(factor(small).has_snapshots());
  CHECK_FALSE(factor(small, false).has_snapshots());
  CHECK_THROWS_AS(factor(small, false).snapshot(2), std::invalid_argument);

  NormalSystem large = NormalSystem::from_dense(DenseMatrix::identity(65), Vector(65, 0.0));
  CHECK_FALSE(factor(large).has_snapshots());
  CHECK(factor(large, true).has_snapshots());
}

TEST_CASE("extract_L reproduces random SPD inputs") {
  auto gen = testsup::make_rng(78);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + gen() % 7;
    const NormalSystem s = testsup::random_spd_system(gen, n);
    const DenseMatrix l = extract_L(factor(s));
    CHECK(testsup::matrix_rel_diff(matmul(transpose(l), l), s.full_matrix()) < 1e-10);
    for (std::size_t i = 0; i < n; ++i) CHECK(l(i, i) > 0.0);
  }
}
