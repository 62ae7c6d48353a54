#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "latfit/matrix.hpp"

namespace latfit {

// A finite point set A = {a_1 .. a_k} in R^n, stored one point per row.
// Construction enforces k > n + 1 and full dimensionality: the smallest
// singular value of the centered point matrix must exceed 1e-9 times the
// largest.
class PointSet {
 public:
  explicit PointSet(Matrix coords);
  static PointSet from_rows(const std::vector<Vector>& rows);
  static PointSet from_values(const std::vector<double>& values);

  std::size_t size() const noexcept { return coords_.rows(); }
  std::size_t dim() const noexcept { return coords_.cols(); }
  std::span<const double> point(std::size_t i) const { return coords_.row(i); }
  const Matrix& coords() const noexcept { return coords_; }

  // Values of one coordinate across all points, in point order.
  std::vector<double> coordinate(std::size_t axis) const {
    return coords_.col_vector(axis);
  }

 private:
  Matrix coords_;
};

// origin + basis_1 Z + ... + basis_n Z. Basis vectors are the rows of `basis`.
class AffineLattice {
 public:
  AffineLattice(Vector origin, Matrix basis);

  std::size_t dim() const noexcept { return origin_.size(); }
  const Vector& origin() const noexcept { return origin_; }
  const Matrix& basis() const noexcept { return basis_; }
  std::span<const double> basis_vector(std::size_t i) const {
    return basis_.row(i);
  }

  // origin + sum_j coeffs[j] * basis_j
  Vector point_at(std::span<const std::int64_t> coeffs) const;

 private:
  Vector origin_;
  Matrix basis_;
};

struct FitReport {
  AffineLattice lattice;
  // Lattice coordinates of the approximating point of each input point.
  std::vector<IntVector> coeffs;
  std::vector<double> distances;
  double delta = 0.0;
  double diameter = 0.0;
  double norm_max = 0.0;
  double norm_l2 = 0.0;

  std::vector<Vector> approximations() const;
  double residual_sum_squares() const;
};

struct NearestPoint {
  IntVector coeffs;
  double distance = 0.0;
};

// Closest-vector evaluation against a fixed lattice. The basis is LLL-reduced
// once on construction; queries use Babai rounding in the reduced basis and,
// for n <= 3, also try every offset in {-1,0,1}^n around the rounded point.
// For n = 1 the answer is exact.
class NearestPointSolver {
 public:
  explicit NearestPointSolver(const AffineLattice& lattice);

  NearestPoint query(std::span<const double> p) const;

 private:
  Vector origin_;
  Matrix reduced_;
  IntMatrix transform_;
  Matrix reduced_inverse_t_;
};

NearestPoint nearest_point(const AffineLattice& lat, std::span<const double> p);

// n-th root of |det(basis)|.
double lattice_delta(const AffineLattice& lat);

double diameter(const PointSet& ps);
double diameter(const Matrix& points);

// The two scale-compensated quality norms
//   N     = (max_i dist_i / Delta) * (diam / Delta)^(n / (k - n - 1))
//   N^(2) = (sqrt(sum_i dist_i^2) / Delta) * (diam / Delta)^(n / (k - n - 1))
// with distances to the nearest lattice point.
FitReport score(const PointSet& ps, const AffineLattice& lat);

// Same norms, but each point is measured against the lattice point with the
// given coordinates instead of its nearest one.
FitReport score_assigned(const PointSet& ps, const AffineLattice& lat,
                         const std::vector<IntVector>& coeffs);

// The correction factor (diam / Delta)^(n/(k-n-1)) / Delta shared by both
// norms.
double norm_factor(double diam, double delta, std::size_t k, std::size_t n);

}  // namespace latfit
