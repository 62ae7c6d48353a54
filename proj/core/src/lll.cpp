#include "latfit/lll.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "latfit/error.hpp"

namespace latfit {
namespace {

using std::int64_t;

template <typename Real>
Real abs_r(const Real& x) {
  using std::abs;
  return abs(x);
}

template <typename Real>
Real sqrt_r(const Real& x) {
  using std::sqrt;
  return sqrt(x);
}

template <typename Real>
Real round_r(const Real& x) {
  using std::round;
  return round(x);
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::kPrecisionLoss, "unimodular transform overflows int64");
  }
  return out;
}

int64_t checked_sub(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw Error(ErrorCode::kPrecisionLoss, "unimodular transform overflows int64");
  }
  return out;
}

template <typename Real>
class Reducer {
 public:
  Reducer(const Matrix& input, const ReductionParams& params)
      : m_(input.rows()),
        dim_(input.cols()),
        delta_(params.delta),
        input_(BasicMatrix<Real>::convert(input)),
        basis_(input_),
        transform_(IntMatrix::identity(input.rows())),
        bstar_(input.rows(), input.cols()),
        mu_(input.rows(), input.rows()),
        bnorm2_(input.rows()) {
    const int digits = params.precision_digits;
    // 1e-12 at the double tier; tightened as more digits are carried.
    using std::pow;
    dependence_tol_ = pow(Real(10), Real(-(digits - 4)));
  }

  ReductionResult run() {
    for (std::size_t i = 0; i < m_; ++i) orthogonalize(i);
    std::size_t k = 1;
    std::size_t iterations = 0;
    constexpr std::size_t kIterationCap = 10'000'000;
    while (k < m_) {
      if (++iterations > kIterationCap) {
        throw Error(ErrorCode::kPrecisionLoss, "reduction did not terminate");
      }
      orthogonalize(k);
      size_reduce(k);
      const Real mu = mu_(k, k - 1);
      if (bnorm2_[k] >= (Real(delta_) - mu * mu) * bnorm2_[k - 1]) {
        ++k;
      } else {
        basis_.swap_rows(k, k - 1);
        transform_.swap_rows(k, k - 1);
        orthogonalize(k - 1);
        k = k > 1 ? k - 1 : 1;
      }
    }
    if (m_ == 1) orthogonalize(0);

    ReductionResult out{Matrix(m_, dim_), transform_, 0.0};
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) {
        out.reduced(r, c) = static_cast<double>(basis_(r, c));
      }
    }
    out.shortest_norm = norm(out.reduced.row(0));
    return out;
  }

 private:
  // Recomputes b*_i and mu_{i,j} (j < i) from the current row b_i and the
  // stored b*_j, with one re-orthogonalization pass.
  void orthogonalize(std::size_t i) {
    std::vector<Real> v(basis_.row(i).begin(), basis_.row(i).end());
    Real row_norm2 = Real(0);
    for (const auto& x : v) row_norm2 += x * x;
    for (std::size_t j = 0; j < i; ++j) mu_(i, j) = Real(0);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        Real s = Real(0);
        for (std::size_t c = 0; c < dim_; ++c) s += v[c] * bstar_(j, c);
        const Real coef = s / bnorm2_[j];
        mu_(i, j) += coef;
        for (std::size_t c = 0; c < dim_; ++c) v[c] -= coef * bstar_(j, c);
      }
    }
    Real n2 = Real(0);
    for (std::size_t c = 0; c < dim_; ++c) {
      bstar_(i, c) = v[c];
      n2 += v[c] * v[c];
    }
    if (row_norm2 == Real(0) ||
        sqrt_r(n2) < dependence_tol_ * sqrt_r(row_norm2)) {
      throw Error(ErrorCode::kDependentRows,
                  "Gram-Schmidt vector " + std::to_string(i) + " vanished");
    }
    bnorm2_[i] = n2;
  }

  void size_reduce(std::size_t k) {
    constexpr int kMaxRounds = 64;
    for (int round = 0; round < kMaxRounds; ++round) {
      bool changed = false;
      for (std::size_t j = k; j-- > 0;) {
        const Real r = round_r(mu_(k, j));
        if (r == Real(0)) continue;
        if (abs_r(r) > Real(9.0e18)) {
          throw Error(ErrorCode::kPrecisionLoss, "size-reduction coefficient too large");
        }
        const auto ri = static_cast<int64_t>(r);
        for (std::size_t c = 0; c < m_; ++c) {
          transform_(k, c) =
              checked_sub(transform_(k, c), checked_mul(ri, transform_(j, c)));
        }
        for (std::size_t l = 0; l < j; ++l) mu_(k, l) -= r * mu_(j, l);
        mu_(k, j) -= r;
        changed = true;
      }
      if (!changed) return;
      refresh_row(k);
      orthogonalize(k);
      // Recomputed coefficients may drift past 1/2 when precision is short;
      // another pass absorbs that.
      bool reduced = true;
      for (std::size_t j = 0; j < k; ++j) {
        if (abs_r(mu_(k, j)) > Real(0.5 + 1e-6)) reduced = false;
      }
      if (reduced) return;
    }
    throw Error(ErrorCode::kPrecisionLoss, "size reduction failed to converge");
  }

  // b_k := transform_k * input, evaluated at working precision.
  void refresh_row(std::size_t k) {
    for (std::size_t c = 0; c < dim_; ++c) {
      Real s = Real(0);
      for (std::size_t j = 0; j < m_; ++j) {
        if (transform_(k, j) != 0) s += Real(transform_(k, j)) * input_(j, c);
      }
      basis_(k, c) = s;
    }
  }

  std::size_t m_;
  std::size_t dim_;
  double delta_;
  BasicMatrix<Real> input_;
  BasicMatrix<Real> basis_;
  IntMatrix transform_;
  BasicMatrix<Real> bstar_;
  BasicMatrix<Real> mu_;
  std::vector<Real> bnorm2_;
  Real dependence_tol_;
};

// Gram-Schmidt coefficients of a double basis, for the post-hoc checks.
void gram_schmidt(const Matrix& b, Matrix& mu, std::vector<double>& bnorm2) {
  const std::size_t m = b.rows();
  const std::size_t dim = b.cols();
  Matrix bstar = b;
  mu = Matrix(m, m);
  bnorm2.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double coef = dot(b.row(i), bstar.row(j)) / bnorm2[j];
      mu(i, j) = coef;
      for (std::size_t c = 0; c < dim; ++c) bstar(i, c) -= coef * bstar(j, c);
    }
    bnorm2[i] = dot(bstar.row(i), bstar.row(i));
  }
}

}  // namespace

void ReductionParams::validate() const {
  if (!(delta > 0.25 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0.25, 1)");
  }
  Precision{precision_digits}.validate();
}

ReductionResult lll_reduce(const Matrix& basis, const ReductionParams& params) {
  params.validate();
  if (!all_finite(basis)) {
    throw Error(ErrorCode::kInvalidArgument, "basis has non-finite entries");
  }
  if (Precision{params.precision_digits}.extended()) {
    return Reducer<ExtendedReal>(basis, params).run();
  }
  return Reducer<double>(basis, params).run();
}

bool is_size_reduced(const Matrix& basis, double slack) {
  Matrix mu;
  std::vector<double> bnorm2;
  gram_schmidt(basis, mu, bnorm2);
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(mu(i, j)) > 0.5 + slack) return false;
    }
  }
  return true;
}

bool satisfies_lovasz(const Matrix& basis, double delta, double slack) {
  Matrix mu;
  std::vector<double> bnorm2;
  gram_schmidt(basis, mu, bnorm2);
  for (std::size_t k = 1; k < basis.rows(); ++k) {
    const double lhs = bnorm2[k];
    const double rhs = (delta - mu(k, k - 1) * mu(k, k - 1)) * bnorm2[k - 1];
    if (lhs < rhs - slack * std::max(1.0, std::abs(rhs))) return false;
  }
  return true;
}

double integer_determinant(const IntMatrix& m) {
  using boost::multiprecision::cpp_int;
  if (!m.square()) {
    throw Error(ErrorCode::kDimensionMismatch, "determinant of non-square matrix");
  }
  const std::size_t n = m.rows();
  std::vector<std::vector<cpp_int>> a(n, std::vector<cpp_int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  }
  int sign = 1;
  cpp_int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && a[swap_with][k] == 0) ++swap_with;
      if (swap_with == n) return 0.0;
      std::swap(a[k], a[swap_with]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  const cpp_int det = a[n - 1][n - 1] * sign;
  return det.convert_to<double>();
}

}  // namespace latfit
