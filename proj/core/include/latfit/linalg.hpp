#pragma once

// Dense linear algebra kernels: determinant, inverse, solve, least squares
// and singular values. All kernels are templates over the scalar type so the
// same code runs at double and ExtendedReal precision.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "latfit/error.hpp"
#include "latfit/matrix.hpp"

namespace latfit::linalg {

namespace detail {

template <typename T>
T abs_of(const T& x) {
  using std::abs;
  return abs(x);
}

template <typename T>
T sqrt_of(const T& x) {
  using std::sqrt;
  return sqrt(x);
}

template <typename T>
void require_square(const BasicMatrix<T>& m) {
  if (!m.square()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix must be square");
  }
}

// LU factorization with partial pivoting, in place. Returns the permutation
// sign, or 0 when a pivot column is exactly zero.
template <typename T>
int lu_in_place(BasicMatrix<T>& a, std::vector<std::size_t>& perm) {
  const std::size_t n = a.rows();
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    T best = abs_of(a(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      if (abs_of(a(r, k)) > best) {
        best = abs_of(a(r, k));
        pivot = r;
      }
    }
    if (best == T(0)) return 0;
    if (pivot != k) {
      a.swap_rows(pivot, k);
      std::swap(perm[pivot], perm[k]);
      sign = -sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const T f = a(r, k) / a(k, k);
      a(r, k) = f;
      for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
    }
  }
  return sign;
}

}  // namespace detail

template <typename T>
T determinant(const BasicMatrix<T>& m) {
  detail::require_square(m);
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  BasicMatrix<T> a = m;
  std::vector<std::size_t> perm;
  const int sign = detail::lu_in_place(a, perm);
  if (sign == 0) return T(0);
  T det = T(sign);
  for (std::size_t i = 0; i < n; ++i) det *= a(i, i);
  return det;
}

// |det| <= 1e-12 * (max row norm)^n counts as singular.
template <typename T>
T singularity_threshold(const BasicMatrix<T>& m) {
  T max_row = T(0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    T s = T(0);
    for (std::size_t c = 0; c < m.cols(); ++c) s += m(r, c) * m(r, c);
    max_row = std::max(max_row, detail::sqrt_of(s));
  }
  T scale = T(1);
  for (std::size_t i = 0; i < m.rows(); ++i) scale *= max_row;
  return T(1e-12) * scale;
}

template <typename T>
bool is_singular(const BasicMatrix<T>& m) {
  detail::require_square(m);
  return detail::abs_of(determinant(m)) <= singularity_threshold(m);
}

// Solves m * x = rhs for square nonsingular m.
template <typename T>
BasicMatrix<T> solve(const BasicMatrix<T>& m, const BasicMatrix<T>& rhs) {
  detail::require_square(m);
  if (rhs.rows() != m.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "solve: rhs row count");
  }
  if (is_singular(m)) {
    throw Error(ErrorCode::kSingularMatrix, "solve: matrix is singular");
  }
  const std::size_t n = m.rows();
  BasicMatrix<T> a = m;
  std::vector<std::size_t> perm;
  if (detail::lu_in_place(a, perm) == 0) {
    throw Error(ErrorCode::kSingularMatrix, "solve: zero pivot");
  }
  BasicMatrix<T> x(n, rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    std::vector<T> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      T s = rhs(perm[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= a(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      T s = y[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x(j, c);
      x(i, c) = s / a(i, i);
    }
  }
  return x;
}

template <typename T>
BasicMatrix<T> invert(const BasicMatrix<T>& m) {
  detail::require_square(m);
  return solve(m, BasicMatrix<T>::identity(m.rows()));
}

// Minimizes ||design * X - targets||_F through a Householder QR of the design
// matrix; the normal equations are never formed.
template <typename T>
BasicMatrix<T> least_squares(const BasicMatrix<T>& design,
                             const BasicMatrix<T>& targets) {
  const std::size_t k = design.rows();
  const std::size_t m = design.cols();
  if (targets.rows() != k) {
    throw Error(ErrorCode::kDimensionMismatch, "least_squares: row counts differ");
  }
  if (k < m) {
    throw Error(ErrorCode::kRankDeficient,
                "least_squares: fewer equations than unknowns");
  }
  BasicMatrix<T> r = design;
  BasicMatrix<T> b = targets;

  T max_col = T(0);
  for (std::size_t c = 0; c < m; ++c) {
    T s = T(0);
    for (std::size_t i = 0; i < k; ++i) s += r(i, c) * r(i, c);
    max_col = std::max(max_col, detail::sqrt_of(s));
  }
  if (max_col == T(0)) {
    throw Error(ErrorCode::kRankDeficient, "least_squares: zero design matrix");
  }

  for (std::size_t j = 0; j < m; ++j) {
    T alpha = T(0);
    for (std::size_t i = j; i < k; ++i) alpha += r(i, j) * r(i, j);
    alpha = detail::sqrt_of(alpha);
    if (alpha <= T(1e-12) * max_col) {
      throw Error(ErrorCode::kRankDeficient,
                  "least_squares: design matrix lacks full column rank");
    }
    if (r(j, j) > T(0)) alpha = -alpha;
    std::vector<T> v(k - j);
    for (std::size_t i = j; i < k; ++i) v[i - j] = r(i, j);
    v[0] -= alpha;
    T vnorm2 = T(0);
    for (const auto& x : v) vnorm2 += x * x;
    if (vnorm2 == T(0)) continue;
    auto reflect = [&](BasicMatrix<T>& a, std::size_t col) {
      T s = T(0);
      for (std::size_t i = j; i < k; ++i) s += v[i - j] * a(i, col);
      s = T(2) * s / vnorm2;
      for (std::size_t i = j; i < k; ++i) a(i, col) -= s * v[i - j];
    };
    for (std::size_t c = j; c < m; ++c) reflect(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) reflect(b, c);
  }

  BasicMatrix<T> x(m, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = m; i-- > 0;) {
      T s = b(i, c);
      for (std::size_t j = i + 1; j < m; ++j) s -= r(i, j) * x(j, c);
      x(i, c) = s / r(i, i);
    }
  }
  return x;
}

// Singular values in descending order, by one-sided Jacobi rotations.
template <typename T>
std::vector<T> singular_values(const BasicMatrix<T>& m) {
  BasicMatrix<T> a = m.rows() >= m.cols() ? m : m.transposed();
  const std::size_t rows = a.rows();
  const std::size_t n = a.cols();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        T alpha = T(0), beta = T(0), gamma = T(0);
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          gamma += a(i, p) * a(i, q);
        }
        if (detail::abs_of(gamma) <=
            T(1e-15) * detail::sqrt_of(alpha * beta)) {
          continue;
        }
        rotated = true;
        const T zeta = (beta - alpha) / (T(2) * gamma);
        const T sgn = zeta >= T(0) ? T(1) : T(-1);
        const T t = sgn / (detail::abs_of(zeta) + detail::sqrt_of(T(1) + zeta * zeta));
        const T cs = T(1) / detail::sqrt_of(T(1) + t * t);
        const T sn = cs * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const T ap = a(i, p);
          const T aq = a(i, q);
          a(i, p) = cs * ap - sn * aq;
          a(i, q) = sn * ap + cs * aq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<T> sv(n);
  for (std::size_t c = 0; c < n; ++c) {
    T s = T(0);
    for (std::size_t i = 0; i < rows; ++i) s += a(i, c) * a(i, c);
    sv[c] = detail::sqrt_of(s);
  }
  std::sort(sv.begin(), sv.end(), [](const T& x, const T& y) { return x > y; });
  return sv;
}

// Row rank by Gaussian elimination with partial pivoting; pivots below
// rel_tol times the largest entry count as zero.
template <typename T>
std::size_t rank(const BasicMatrix<T>& m, double rel_tol = 1e-9) {
  BasicMatrix<T> a = m;
  T scale = T(0);
  for (const auto& x : a.data()) scale = std::max(scale, detail::abs_of(x));
  if (scale == T(0)) return 0;
  const T tol = T(rel_tol) * scale;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t pivot = r;
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (detail::abs_of(a(i, c)) > detail::abs_of(a(pivot, c))) pivot = i;
    }
    if (detail::abs_of(a(pivot, c)) <= tol) continue;
    a.swap_rows(pivot, r);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      const T f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

}  // namespace latfit::linalg
