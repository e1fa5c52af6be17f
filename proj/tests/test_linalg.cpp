#include <cmath>
#include <random>
#include <vector>
#include <gtest/gtest.h>

#include "porogrowth/linalg.hpp"

using namespace porogrowth;

namespace {

// Dense elimination with partial pivoting, row-major.
std::vector<double> dense_oracle(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

} // namespace

TEST(Banded, IdentityReturnsRhs) {
  for (std::size_t n : {1u, 2u, 9u}) {
    BandedMatrix A(n, n > 1 ? 1 : 0, n > 1 ? 1 : 0);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      A.set(i, i, 1.0);
      b[i] = 0.5 * i - 3.0;
    }
    EXPECT_EQ(solve_banded(A, b), b);
  }
}

TEST(Banded, TwoByTwo) {
  BandedMatrix A(2, 1, 1);
  A.set(0, 0, 2);
  A.set(0, 1, 1);
  A.set(1, 0, 1);
  A.set(1, 1, 2);
  const auto x = solve_banded(A, std::vector<double>{3, 3});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(Banded, OutOfBandAccess) {
  BandedMatrix A(5, 1, 2);
  EXPECT_THROW(A.set(3, 0, 1.0), InvalidProblem);
  EXPECT_THROW(A.set(0, 4, 1.0), InvalidProblem);
  EXPECT_NO_THROW(A.set(0, 2, 1.0));
  EXPECT_EQ(A(4, 0), 0.0);
  EXPECT_THROW(BandedMatrix(3, 3, 0), InvalidProblem);
}

TEST(Banded, MatchesDenseOracleRandomDominant) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 50, kl = 2, ku = 2;
    BandedMatrix A(n, kl, ku);
    std::vector<double> dense(n * n, 0.0), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      double off = 0.0;
      for (std::size_t j = (i >= kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
        if (i == j) continue;
        const double v = U(rng);
        A.set(i, j, v);
        dense[i * n + j] = v;
        off += std::abs(v);
      }
      A.set(i, i, off + 1.0);
      dense[i * n + i] = off + 1.0;
      b[i] = U(rng);
    }
    const auto x = solve_banded(A, b);
    const auto y = dense_oracle(dense, b);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LT(std::abs(x[i] - y[i]), 1e-10);
  }
}

TEST(Banded, PivotingOnWeakDiagonal) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::size_t n = 30, kl = 3, ku = 3;
  BandedMatrix A(n, kl, ku);
  std::vector<double> dense(n * n, 0.0), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = (i >= kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
      const double v = i == j ? 1e-8 * U(rng) : U(rng) + (i == j + 2 ? 4.0 : 0.0);
      A.set(i, j, v);
      dense[i * n + j] = v;
    }
    b[i] = U(rng);
  }
  const auto x = solve_banded(A, b);
  const auto y = dense_oracle(dense, b);
  for (std::size_t i = 0; i < n; ++i) EXPECT_LT(std::abs(x[i] - y[i]), 1e-10 * max_abs(y));
  // Residual contract.
  auto r = A.multiply(x);
  for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
  EXPECT_LE(max_abs(r), 1e-10 * (A.norm_inf() * max_abs(x) + max_abs(b)));
}

TEST(Banded, SingularDetected) {
  BandedMatrix A(3, 1, 1);
  A.set(0, 0, 1.0);
  A.set(1, 1, 0.0);
  A.set(2, 2, 1.0);
  EXPECT_THROW(solve_banded(A, std::vector<double>{1, 1, 1}), SingularSystem);
  BandedMatrix Z(4, 1, 1);
  EXPECT_THROW(solve_banded(Z, std::vector<double>(4, 0.0)), SingularSystem);
}

TEST(Banded, LengthMismatch) {
  BandedMatrix A(3, 1, 1);
  EXPECT_THROW(solve_banded(A, std::vector<double>{1, 1}), InvalidProblem);
}

TEST(Tridiagonal, Identity) {
  const std::vector<double> b{1, -2, 3, 4};
  EXPECT_EQ(solve_tridiagonal(std::vector<double>(3, 0.0), std::vector<double>(4, 1.0),
                              std::vector<double>(3, 0.0), b),
            b);
}

TEST(Tridiagonal, HandExample) {
  const auto x = solve_tridiagonal(std::vector<double>{-1, -1}, std::vector<double>{2, 2, 2},
                                   std::vector<double>{-1, -1}, std::vector<double>{1, 0, 1});
  for (double v : x) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Tridiagonal, MatchesBanded) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial * 2;
    std::vector<double> lo(n - 1), di(n), up(n - 1), b(n);
    BandedMatrix A(n, 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
      double off = 0.0;
      if (i > 0) off += std::abs(lo[i - 1] = U(rng));
      if (i + 1 < n) off += std::abs(up[i] = U(rng));
      di[i] = (off + 0.1 + std::abs(U(rng))) * (U(rng) < 0 ? -1 : 1);
      b[i] = U(rng);
      A.set(i, i, di[i]);
      if (i > 0) A.set(i, i - 1, lo[i - 1]);
      if (i + 1 < n) A.set(i, i + 1, up[i]);
    }
    const auto x = solve_tridiagonal(lo, di, up, b);
    const auto y = solve_banded(A, b);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LT(std::abs(x[i] - y[i]), 1e-10);
  }
}

TEST(Tridiagonal, Errors) {
  EXPECT_THROW(solve_tridiagonal(std::vector<double>{1}, std::vector<double>{0, 1},
                                 std::vector<double>{1}, std::vector<double>{1, 1}),
               SingularSystem);
  EXPECT_THROW(solve_tridiagonal(std::vector<double>{1, 1}, std::vector<double>{1, 1},
                                 std::vector<double>{1}, std::vector<double>{1, 1}),
               InvalidProblem);
}
