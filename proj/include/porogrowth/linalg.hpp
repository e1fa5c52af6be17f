#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "porogrowth/errors.hpp"

namespace porogrowth {

/// Pivots smaller than this multiple of ||A||_inf are treated as zero.
inline constexpr double singular_pivot_ratio = 1.0e-30;

/// Square band matrix with kl sub- and ku super-diagonals.
///
/// Storage is column-major in the LAPACK general-band layout with kl extra
/// rows on top, so that the LU factors with row interchanges fit in place.
class BandedMatrix {
public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
      : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(ld_ * n, 0.0) {
    if (n == 0) throw InvalidProblem("banded matrix dimension must be positive");
    if (kl >= n && n > 1) throw InvalidProblem("lower bandwidth must be below n");
    if (ku >= n && n > 1) throw InvalidProblem("upper bandwidth must be below n");
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t lower() const noexcept { return kl_; }
  std::size_t upper() const noexcept { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const noexcept {
    return i < n_ && j < n_ && i + ku_ >= j && j + kl_ >= i;
  }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return in_band(i, j) ? ab_[slot(i, j)] : 0.0;
  }

  void set(std::size_t i, std::size_t j, double v) {
    if (!in_band(i, j)) throw InvalidProblem("entry outside of the band");
    ab_[slot(i, j)] = v;
  }

  void add(std::size_t i, std::size_t j, double v) {
    if (!in_band(i, j)) throw InvalidProblem("entry outside of the band");
    ab_[slot(i, j)] += v;
  }

  /// Replace row i by the identity row.
  void set_identity_row(std::size_t i) {
    const std::size_t lo = i >= kl_ ? i - kl_ : 0;
    const std::size_t hi = std::min(n_ - 1, i + ku_);
    for (std::size_t j = lo; j <= hi; ++j) ab_[slot(i, j)] = 0.0;
    ab_[slot(i, i)] = 1.0;
  }

  double norm_inf() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double row = 0.0;
      const std::size_t lo = i >= kl_ ? i - kl_ : 0;
      const std::size_t hi = std::min(n_ - 1, i + ku_);
      for (std::size_t j = lo; j <= hi; ++j) row += std::abs(ab_[slot(i, j)]);
      best = std::max(best, row);
    }
    return best;
  }

  std::vector<double> multiply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t lo = i >= kl_ ? i - kl_ : 0;
      const std::size_t hi = std::min(n_ - 1, i + ku_);
      for (std::size_t j = lo; j <= hi; ++j) y[i] += ab_[slot(i, j)] * x[j];
    }
    return y;
  }

private:
  friend std::vector<double> solve_banded(const BandedMatrix&, std::span<const double>);

  // Row index of A(i, j) inside column j is kl + ku + i - j.
  std::size_t slot(std::size_t i, std::size_t j) const noexcept {
    return (kl_ + ku_ + i - j) + j * ld_;
  }

  std::size_t n_, kl_, ku_, ld_;
  std::vector<double> ab_;
};

namespace detail {

inline double norm_inf(std::span<const double> v) noexcept {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline bool residual_ok(double residual, double a_norm, double x_norm, double b_norm) noexcept {
  return residual <= 1.0e-10 * (a_norm * x_norm + b_norm);
}

} // namespace detail

/// Gaussian elimination with partial pivoting restricted to the band.
inline std::vector<double> solve_banded(const BandedMatrix& A, std::span<const double> b) {
  const std::size_t n = A.n_;
  if (b.size() != n) throw InvalidProblem("right-hand side length does not match matrix");
  const std::size_t kl = A.kl_, ku = A.ku_, kv = kl + ku, ld = A.ld_;
  const double a_norm = A.norm_inf();
  const double tiny = singular_pivot_ratio * a_norm;

  std::vector<double> ab = A.ab_;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return ab[(kv + i - j) + j * ld]; };
  std::vector<std::size_t> pivot(n);

  std::size_t ju = 0; // last column touched by the U factor so far
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t km = std::min(kl, n - 1 - j);
    std::size_t jp = 0;
    double best = std::abs(at(j, j));
    for (std::size_t r = 1; r <= km; ++r) {
      const double v = std::abs(at(j + r, j));
      if (v > best) {
        best = v;
        jp = r;
      }
    }
    pivot[j] = j + jp;
    if (!(best > tiny) || a_norm == 0.0)
      throw SingularSystem("numerically singular system at column " + std::to_string(j));

    ju = std::max(ju, std::min(j + ku + jp, n - 1));
    if (jp != 0)
      for (std::size_t c = j; c <= ju; ++c) std::swap(at(j, c), at(j + jp, c));

    if (km > 0) {
      const double inv = 1.0 / at(j, j);
      for (std::size_t r = 1; r <= km; ++r) at(j + r, j) *= inv;
      for (std::size_t c = j + 1; c <= ju; ++c) {
        const double ujc = at(j, c);
        if (ujc == 0.0) continue;
        for (std::size_t r = 1; r <= km; ++r) at(j + r, c) -= at(j + r, j) * ujc;
      }
    }
  }

  std::vector<double> x(b.begin(), b.end());
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t km = std::min(kl, n - 1 - j);
    if (pivot[j] != j) std::swap(x[j], x[pivot[j]]);
    for (std::size_t r = 1; r <= km; ++r) x[j + r] -= at(j + r, j) * x[j];
  }
  for (std::size_t jj = n; jj-- > 0;) {
    x[jj] /= at(jj, jj);
    const std::size_t lo = jj >= kv ? jj - kv : 0;
    for (std::size_t i = lo; i < jj; ++i) x[i] -= at(i, jj) * x[jj];
  }

#ifndef NDEBUG
  {
    auto ax = A.multiply(x);
    for (std::size_t i = 0; i < n; ++i) ax[i] -= b[i];
    assert(detail::residual_ok(detail::norm_inf(ax), a_norm, detail::norm_inf(x),
                               detail::norm_inf(b)));
  }
#endif
  return x;
}

/// Thomas algorithm for the tridiagonal system with sub-diagonal `lower`
/// (length n-1), diagonal `diag` (n) and super-diagonal `upper` (n-1).
/// No pivoting; meant for diagonally dominant or M-matrix systems.
inline std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> b) {
  const std::size_t n = diag.size();
  if (n == 0 || b.size() != n || lower.size() + 1 != n || upper.size() + 1 != n)
    throw InvalidProblem("tridiagonal system has inconsistent lengths");

  double a_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(lower[i - 1]);
    if (i + 1 < n) row += std::abs(upper[i]);
    a_norm = std::max(a_norm, row);
  }
  const double tiny = singular_pivot_ratio * a_norm;

  std::vector<double> c_star(n, 0.0), x(n);
  double piv = diag[0];
  if (!(std::abs(piv) > tiny) || a_norm == 0.0)
    throw SingularSystem("numerically singular tridiagonal system at row 0");
  if (n > 1) c_star[0] = upper[0] / piv;
  x[0] = b[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - lower[i - 1] * c_star[i - 1];
    if (!(std::abs(piv) > tiny))
      throw SingularSystem("numerically singular tridiagonal system at row " + std::to_string(i));
    if (i + 1 < n) c_star[i] = upper[i] / piv;
    x[i] = (b[i] - lower[i - 1] * x[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_star[i] * x[i + 1];

#ifndef NDEBUG
  {
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = diag[i] * x[i] - b[i];
      if (i > 0) r += lower[i - 1] * x[i - 1];
      if (i + 1 < n) r += upper[i] * x[i + 1];
      res = std::max(res, std::abs(r));
    }
    assert(detail::residual_ok(res, a_norm, detail::norm_inf(x), detail::norm_inf(b)));
  }
#endif
  return x;
}

} // namespace porogrowth
