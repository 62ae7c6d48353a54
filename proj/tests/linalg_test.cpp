#include "latfit/linalg.hpp"

#include <random>

#include <gtest/gtest.h>

#include "datasets.hpp"
#include "latfit/error.hpp"
#include "latfit/precision.hpp"

namespace latfit {
namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double lo = -1.0,
                     double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = u(rng);
  }
  return m;
}

double rss(const Matrix& design, const Matrix& x, const Matrix& targets) {
  const Matrix res = design * x;
  double s = 0.0;
  for (std::size_t i = 0; i < res.rows(); ++i) {
    for (std::size_t j = 0; j < res.cols(); ++j) {
      const double e = res(i, j) - targets(i, j);
      s += e * e;
    }
  }
  return s;
}

TEST(Invert, IdentityIsItsOwnInverse) {
  EXPECT_EQ(linalg::invert(Matrix::identity(3)), Matrix::identity(3));
}

TEST(Invert, NegatedInverseOfIntegerBlock) {
  const Matrix q{{-13, -28}, {6, 32}};
  const Matrix inv = linalg::invert(q);
  const Matrix expected{{0.1290, 0.1129}, {-0.0242, -0.0524}};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(-inv(i, j), expected(i, j), 5e-5);
  }
}

TEST(Invert, SingularThrows) {
  try {
    linalg::invert(Matrix{{1, 2}, {2, 4}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularMatrix);
  }
}

TEST(Invert, TinyButRegularMatrixIsNotSingular) {
  // Scale-aware threshold: a well-conditioned matrix with 1e-5 entries.
  const Matrix m{{2e-5, 1e-5}, {-1e-5, 3e-5}};
  EXPECT_FALSE(linalg::is_singular(m));
  EXPECT_LT(max_abs_diff(linalg::invert(m) * m, Matrix::identity(2)), 1e-9);
}

TEST(Invert, RandomRoundTrip) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    Matrix m = random_matrix(rng, 4, 4);
    for (std::size_t i = 0; i < 4; ++i) m(i, i) += 4.0;
    EXPECT_LT(max_abs_diff(m * linalg::invert(m), Matrix::identity(4)), 1e-8);
  }
}

TEST(Determinant, Basics) {
  EXPECT_DOUBLE_EQ(linalg::determinant(Matrix::identity(5)), 1.0);
  EXPECT_DOUBLE_EQ(linalg::determinant(Matrix{{-13, -28}, {6, 32}}), -248.0);
  EXPECT_DOUBLE_EQ(linalg::determinant(Matrix{{1, 2}, {2, 4}}), 0.0);
  EXPECT_NEAR(linalg::determinant(Matrix{{2, 0, 1}, {1, 3, 2}, {1, 1, 2}}), 6.0, 1e-12);
}

TEST(Determinant, Multiplicative) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Matrix a = random_matrix(rng, 3, 3);
    const Matrix b = random_matrix(rng, 3, 3);
    const double lhs = linalg::determinant(a * b);
    const double rhs = linalg::determinant(a) * linalg::determinant(b);
    EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(Determinant, ExtendedPrecisionAgrees) {
  const Matrix m{{0.3, 0.7, 0.1}, {0.2, -0.5, 0.9}, {1.1, 0.4, -0.6}};
  const auto ext = BasicMatrix<ExtendedReal>::convert(m);
  EXPECT_NEAR(static_cast<double>(linalg::determinant(ext)), linalg::determinant(m), 1e-15);
}

TEST(Solve, MatchesInverse) {
  const Matrix m{{4, 1}, {2, 3}};
  const Matrix x = linalg::solve(m, Matrix{{1}, {2}});
  EXPECT_NEAR(x(0, 0), 0.1, 1e-15);
  EXPECT_NEAR(x(1, 0), 0.6, 1e-15);
}

TEST(LeastSquares, IdentityDesignReturnsTargets) {
  const Matrix t{{1.5, -2}, {0.25, 7}, {3, 3}};
  EXPECT_LT(max_abs_diff(linalg::least_squares(Matrix::identity(3), t), t), 1e-14);
}

TEST(LeastSquares, OneDimensionalFit) {
  const std::vector<double> p{0, 72, 93, 110, 138, 150};
  const auto a = testdata::sqrt_primes();
  Matrix design(6, 2);
  Matrix targets(6, 1);
  for (std::size_t i = 0; i < 6; ++i) {
    design(i, 0) = 1;
    design(i, 1) = p[i];
    targets(i, 0) = a[i];
  }
  const Matrix x = linalg::least_squares(design, targets);
  EXPECT_NEAR(x(0, 0), 0.0007, 5e-5);
  EXPECT_NEAR(x(1, 0), 0.0240, 5e-5);
}

TEST(LeastSquares, TwoDimensionalFitOrigin) {
  const Matrix design{{1, -14, 11}, {1, 0, 0},   {1, -19, 7},
                      {1, -7, -3},  {1, -13, -7}, {1, -2, -31}};
  const Matrix targets = testdata::permuted_points().coords();
  const Matrix x = linalg::least_squares(design, targets);
  EXPECT_NEAR(x(0, 0), 1.2955, 5e-5);
  EXPECT_NEAR(x(0, 1), 0.0000, 5e-5);
}

TEST(LeastSquares, RankDeficientThrows) {
  const Matrix design{{1, 2}, {2, 4}, {3, 6}};
  try {
    linalg::least_squares(design, Matrix{{1}, {2}, {3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
  }
  EXPECT_THROW(linalg::least_squares(Matrix{{1, 2, 3}}, Matrix{{1}}), Error);
}

TEST(LeastSquares, ResidualIsGlobalMinimum) {
  std::mt19937_64 rng(3);
  const Matrix design = random_matrix(rng, 12, 3, -5, 5);
  const Matrix targets = random_matrix(rng, 12, 2, -5, 5);
  const Matrix x = linalg::least_squares(design, targets);
  const double best = rss(design, x, targets);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    Matrix delta(3, 2);
    double len = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        delta(i, j) = g(rng);
        len += delta(i, j) * delta(i, j);
      }
    }
    Matrix moved = x;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 2; ++j) moved(i, j) += 1e-3 * delta(i, j) / std::sqrt(len);
    }
    EXPECT_GE(rss(design, moved, targets), best);
  }
}

TEST(Rank, CountsIndependentRows) {
  EXPECT_EQ(linalg::rank(Matrix{{1, 2}, {2, 4}, {0, 0}}), 1u);
  EXPECT_EQ(linalg::rank(Matrix::identity(4)), 4u);
  const auto sv = linalg::singular_values(Matrix{{3, 0}, {0, -4}});
  EXPECT_NEAR(sv[0], 4.0, 1e-14);
  EXPECT_NEAR(sv[1], 3.0, 1e-14);
}

}  // namespace
}  // namespace latfit
